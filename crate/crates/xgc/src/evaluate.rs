//! Benchmark evaluation: run the pipeline over a scored dataset, correlate
//! predictions against subjective scores over repeated random train/test
//! splits, and emit a machine-readable report.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use xgc_core::brisque::{self, BrisqueFeatures, SvrModel, FEATURE_COUNT};
use xgc_core::calibrate::{train_fallback_regressor, CalibrateError};
use xgc_core::stats::{krocc, plcc, srocc, StatsError};

use crate::io::{open_clip, DatasetManifest};
use crate::pipeline::{run_pipeline, PipelineConfig};

/// Fewest scored clips a benchmark accepts.
pub const MIN_BENCHMARK_CLIPS: usize = 5;

/// Where predictions come from during evaluation.
#[derive(Debug, Clone)]
pub enum PredictorMode {
    /// Score with a trained model.
    Model(SvrModel),
    /// No model: fit a ridge regressor on the train split's features each
    /// repeat and predict the test split with it.
    TrainFallback {
        /// Ridge regularization strength.
        ridge_lambda: f64,
    },
    /// Predictions equal the subjective scores; a harness sanity mode whose
    /// correlations must be perfect.
    Oracle,
}

impl PredictorMode {
    fn tag(&self) -> &'static str {
        match self {
            PredictorMode::Model(_) => "model",
            PredictorMode::TrainFallback { .. } => "fallback",
            PredictorMode::Oracle => "oracle",
        }
    }
}

/// Benchmark parameters beyond the pipeline configuration.
#[derive(Debug, Clone)]
pub struct BenchmarkOptions {
    /// Number of random splits.
    pub repeats: usize,
    /// Seed for the split shuffles; repeat `r` uses stream `r` of it.
    pub seed: u64,
    /// Prediction source.
    pub predictor: PredictorMode,
    /// Map predictions through a 4-parameter logistic before PLCC.
    pub logistic_plcc: bool,
    /// Include wall-clock timing in the report. Disable for byte-identical
    /// reruns.
    pub include_timing: bool,
}

impl Default for BenchmarkOptions {
    fn default() -> Self {
        Self {
            repeats: 5,
            seed: 0,
            predictor: PredictorMode::TrainFallback {
                ridge_lambda: xgc_core::calibrate::DEFAULT_RIDGE_LAMBDA,
            },
            logistic_plcc: false,
            include_timing: true,
        }
    }
}

/// Benchmark failure.
#[derive(Debug, thiserror::Error)]
pub enum EvaluateError {
    /// Too few clips carry subjective scores.
    #[error("need at least {need} scored clips, manifest has {have}")]
    TooFewClips {
        /// Usable scored clips.
        have: usize,
        /// Required minimum.
        need: usize,
    },
    /// Every scored clip failed to decode.
    #[error("no clip decoded successfully")]
    NoUsableClips,
    /// Configuration precondition failed.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// Repeat count must be positive.
    #[error("repeats must be at least 1")]
    ZeroRepeats,
    /// Correlation computation failed.
    #[error(transparent)]
    Stats(#[from] StatsError),
    /// Fallback training failed.
    #[error(transparent)]
    Calibrate(#[from] CalibrateError),
}

/// The three correlation coefficients of one repeat or aggregate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct CorrelationTriple {
    /// Spearman rank-order correlation.
    pub srocc: f64,
    /// Kendall rank-order correlation (tau-b).
    pub krocc: f64,
    /// Pearson linear correlation.
    pub plcc: f64,
}

/// One repeat's correlations plus a degeneracy marker.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct RepeatResult {
    /// Spearman rank-order correlation.
    pub srocc: f64,
    /// Kendall rank-order correlation (tau-b).
    pub krocc: f64,
    /// Pearson linear correlation.
    pub plcc: f64,
    /// True when any coefficient was undefined (reported as 0): constant
    /// inputs or a test split smaller than two clips.
    pub degenerate: bool,
}

/// Wall-clock accounting, filled when timing is enabled.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TimingReport {
    /// Per-clip processing time net of decoding, milliseconds, ordered by
    /// clip id.
    pub per_clip_ms: Vec<f64>,
    /// Mean of `per_clip_ms`.
    pub mean_ms: f64,
    /// Median of `per_clip_ms`.
    pub median_ms: f64,
    /// Per-clip decode time, same order.
    pub per_clip_decode_ms: Vec<f64>,
    /// Mean decode time.
    pub mean_decode_ms: f64,
}

/// A clip that could not be evaluated; the run continues without it.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClipFailure {
    /// Offending clip.
    pub clip_id: String,
    /// Decode or pipeline diagnostic.
    pub error: String,
}

/// Benchmark output.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    /// SHA-256 of the canonical configuration JSON, hex.
    pub config_digest: String,
    /// Which stages were ablated ("None", "Spatial", "Temporal", "All").
    pub ablation: String,
    /// Prediction source ("model", "fallback", "oracle").
    pub predictor: String,
    /// Clips that entered the splits.
    pub n_clips: usize,
    /// Number of random splits.
    pub repeats: usize,
    /// Seed the splits derive from.
    pub split_seed: u64,
    /// Worker threads used (0 = machine default).
    pub concurrency: usize,
    /// Correlations of each repeat.
    pub per_repeat: Vec<RepeatResult>,
    /// Mean over repeats.
    pub mean: CorrelationTriple,
    /// Median over repeats.
    pub median: CorrelationTriple,
    /// Clips dropped from the run.
    pub failures: Vec<ClipFailure>,
    /// Wall-clock accounting; absent when timing was disabled.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<TimingReport>,
}

/// One scored clip's cached pipeline output.
struct ClipRecord {
    clip_id: String,
    mos: f64,
    mean_features: [f64; FEATURE_COUNT],
    score: Option<f64>,
    pipeline_ms: f64,
    decode_ms: f64,
}

/// Run the benchmark. Every scored manifest entry is decoded and pushed
/// through the pipeline exactly once (clips processed concurrently); the
/// repeat loop then re-splits the cached per-clip results, which is
/// equivalent to re-running the deterministic pipeline per repeat.
pub fn run_benchmark(
    manifest: &DatasetManifest,
    cfg: &PipelineConfig,
    opts: &BenchmarkOptions,
) -> Result<Report, EvaluateError> {
    cfg.validate()
        .map_err(|e| EvaluateError::InvalidConfig(e.to_string()))?;
    if opts.repeats == 0 {
        return Err(EvaluateError::ZeroRepeats);
    }
    let scored: Vec<_> = manifest.scored_entries().collect();
    if scored.len() < MIN_BENCHMARK_CLIPS {
        return Err(EvaluateError::TooFewClips {
            have: scored.len(),
            need: MIN_BENCHMARK_CLIPS,
        });
    }

    let model = match &opts.predictor {
        PredictorMode::Model(m) => Some(m),
        _ => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.concurrency)
        .build()
        .map_err(|e| EvaluateError::InvalidConfig(e.to_string()))?;
    let results: Vec<Result<ClipRecord, ClipFailure>> = pool.install(|| {
        use rayon::prelude::*;
        scored
            .par_iter()
            .map(|(entry, mos)| evaluate_clip(entry, *mos, cfg, model))
            .collect()
    });

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(record) => records.push(record),
            Err(failure) => failures.push(failure),
        }
    }
    // Aggregation order is the sorted clip id, independent of scheduling.
    records.sort_by(|a, b| a.clip_id.cmp(&b.clip_id));
    failures.sort_by(|a, b| a.clip_id.cmp(&b.clip_id));
    if records.is_empty() {
        return Err(EvaluateError::NoUsableClips);
    }

    let per_repeat = split_and_correlate(&records, opts)?;
    let mean = aggregate(&per_repeat, |v| {
        v.iter().sum::<f64>() / v.len() as f64
    });
    let median_triple = aggregate(&per_repeat, median);

    let timing = opts.include_timing.then(|| {
        let per_clip_ms: Vec<f64> = records.iter().map(|r| r.pipeline_ms).collect();
        let per_clip_decode_ms: Vec<f64> = records.iter().map(|r| r.decode_ms).collect();
        TimingReport {
            mean_ms: per_clip_ms.iter().sum::<f64>() / per_clip_ms.len() as f64,
            median_ms: median(&per_clip_ms),
            mean_decode_ms: per_clip_decode_ms.iter().sum::<f64>()
                / per_clip_decode_ms.len() as f64,
            per_clip_ms,
            per_clip_decode_ms,
        }
    });

    Ok(Report {
        config_digest: config_digest(cfg, opts),
        ablation: cfg.ablation_label().to_string(),
        predictor: opts.predictor.tag().to_string(),
        n_clips: records.len(),
        repeats: opts.repeats,
        split_seed: opts.seed,
        concurrency: cfg.concurrency,
        per_repeat,
        mean,
        median: median_triple,
        failures,
        timing,
    })
}

fn evaluate_clip(
    entry: &crate::io::ManifestEntry,
    mos: f64,
    cfg: &PipelineConfig,
    model: Option<&SvrModel>,
) -> Result<ClipRecord, ClipFailure> {
    let fail = |error: String| ClipFailure {
        clip_id: entry.clip_id.clone(),
        error,
    };
    let clip = open_clip(entry).map_err(|e| fail(e.to_string()))?;
    let outcome =
        run_pipeline(&entry.clip_id, clip.as_ref(), cfg, model).map_err(|e| fail(e.to_string()))?;
    let mut mean_features = [0.0; FEATURE_COUNT];
    mean_features.copy_from_slice(&outcome.mean_features);
    Ok(ClipRecord {
        clip_id: entry.clip_id.clone(),
        mos,
        mean_features,
        score: outcome.score,
        pipeline_ms: outcome.pipeline_ms,
        decode_ms: outcome.decode_ms,
    })
}

/// Shuffle, split 80/20, predict the test clips, and correlate — once per
/// repeat. Undefined correlations (test split below two clips, constant
/// predictions) come back as 0 with the degenerate flag set instead of
/// aborting the run.
fn split_and_correlate(
    records: &[ClipRecord],
    opts: &BenchmarkOptions,
) -> Result<Vec<RepeatResult>, EvaluateError> {
    let n = records.len();
    let n_test = ((0.2 * n as f64).round() as usize).max(1);
    let mut out = Vec::with_capacity(opts.repeats);
    for repeat in 0..opts.repeats {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(repeat as u64);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let (test_idx, train_idx) = order.split_at(n_test);

        let mut test: Vec<&ClipRecord> = test_idx.iter().map(|&i| &records[i]).collect();
        test.sort_by(|a, b| a.clip_id.cmp(&b.clip_id));

        let predicted = predict_split(&test, train_idx, records, opts)?;
        let mos: Vec<f64> = test.iter().map(|r| r.mos).collect();
        out.push(correlate(&predicted, &mos, opts.logistic_plcc)?);
    }
    Ok(out)
}

fn predict_split(
    test: &[&ClipRecord],
    train_idx: &[usize],
    records: &[ClipRecord],
    opts: &BenchmarkOptions,
) -> Result<Vec<f64>, EvaluateError> {
    match &opts.predictor {
        PredictorMode::Model(_) => Ok(test
            .iter()
            .map(|r| r.score.expect("model mode always scores"))
            .collect()),
        PredictorMode::Oracle => Ok(test.iter().map(|r| r.mos).collect()),
        PredictorMode::TrainFallback { ridge_lambda } => {
            let rows: Vec<[f64; FEATURE_COUNT]> =
                train_idx.iter().map(|&i| records[i].mean_features).collect();
            let mos: Vec<f64> = train_idx.iter().map(|&i| records[i].mos).collect();
            let model = train_fallback_regressor(&rows, &mos, *ridge_lambda)?;
            test.iter()
                .map(|r| {
                    let features = BrisqueFeatures {
                        values: r.mean_features,
                    };
                    brisque::predict(&features, &model)
                        .map(|s| s.value)
                        .map_err(|e| EvaluateError::InvalidConfig(e.to_string()))
                })
                .collect()
        }
    }
}

fn correlate(a: &[f64], b: &[f64], logistic: bool) -> Result<RepeatResult, EvaluateError> {
    if a.len() < 2 {
        return Ok(RepeatResult {
            srocc: 0.0,
            krocc: 0.0,
            plcc: 0.0,
            degenerate: true,
        });
    }
    let s = srocc(a, b)?;
    let k = krocc(a, b)?;
    let p = plcc(a, b, logistic)?;
    Ok(RepeatResult {
        srocc: s.value,
        krocc: k.value,
        plcc: p.value,
        degenerate: s.degenerate || k.degenerate || p.degenerate,
    })
}

fn aggregate(per_repeat: &[RepeatResult], f: impl Fn(&[f64]) -> f64) -> CorrelationTriple {
    let pick = |sel: fn(&RepeatResult) -> f64| {
        let values: Vec<f64> = per_repeat.iter().map(sel).collect();
        f(&values)
    };
    CorrelationTriple {
        srocc: pick(|r| r.srocc),
        krocc: pick(|r| r.krocc),
        plcc: pick(|r| r.plcc),
    }
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

/// Digest of everything that determines the numeric results: the pipeline
/// configuration and the benchmark options (timing inclusion excluded, since
/// it only annotates the report).
fn config_digest(cfg: &PipelineConfig, opts: &BenchmarkOptions) -> String {
    #[derive(Serialize)]
    struct DigestInput<'a> {
        cfg: &'a PipelineConfig,
        repeats: usize,
        seed: u64,
        predictor: &'static str,
        logistic_plcc: bool,
    }
    let canonical = serde_json::to_vec(&DigestInput {
        cfg,
        repeats: opts.repeats,
        seed: opts.seed,
        predictor: opts.predictor.tag(),
        logistic_plcc: opts.logistic_plcc,
    })
    .expect("config serialization is infallible");
    hex::encode(Sha256::digest(&canonical))
}

/// One row of the per-clip prediction CSV.
#[derive(Debug, Clone)]
pub struct PredictionRow {
    /// Clip identifier.
    pub clip_id: String,
    /// Model prediction.
    pub predicted: f64,
    /// Subjective score.
    pub mos: f64,
    /// Processing time net of decode, milliseconds.
    pub ms: f64,
}

/// Per-clip predictions for CSV export. Model mode uses the pipeline scores;
/// oracle echoes the subjective scores; fallback mode trains one regressor
/// on the whole dataset and predicts in-sample (the CSV is a diagnostic
/// artifact, not a held-out evaluation).
pub fn prediction_rows(
    manifest: &DatasetManifest,
    cfg: &PipelineConfig,
    opts: &BenchmarkOptions,
) -> Result<(Vec<PredictionRow>, Vec<ClipFailure>), EvaluateError> {
    cfg.validate()
        .map_err(|e| EvaluateError::InvalidConfig(e.to_string()))?;
    let scored: Vec<_> = manifest.scored_entries().collect();
    if scored.is_empty() {
        return Err(EvaluateError::TooFewClips { have: 0, need: 1 });
    }
    let model = match &opts.predictor {
        PredictorMode::Model(m) => Some(m),
        _ => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.concurrency)
        .build()
        .map_err(|e| EvaluateError::InvalidConfig(e.to_string()))?;
    let results: Vec<Result<ClipRecord, ClipFailure>> = pool.install(|| {
        use rayon::prelude::*;
        scored
            .par_iter()
            .map(|(entry, mos)| evaluate_clip(entry, *mos, cfg, model))
            .collect()
    });
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(r) => records.push(r),
            Err(f) => failures.push(f),
        }
    }
    records.sort_by(|a, b| a.clip_id.cmp(&b.clip_id));
    failures.sort_by(|a, b| a.clip_id.cmp(&b.clip_id));
    if records.is_empty() {
        return Err(EvaluateError::NoUsableClips);
    }

    let predicted: HashMap<String, f64> = match &opts.predictor {
        PredictorMode::Model(_) => records
            .iter()
            .map(|r| (r.clip_id.clone(), r.score.expect("model mode always scores")))
            .collect(),
        PredictorMode::Oracle => records.iter().map(|r| (r.clip_id.clone(), r.mos)).collect(),
        PredictorMode::TrainFallback { ridge_lambda } => {
            let rows: Vec<[f64; FEATURE_COUNT]> =
                records.iter().map(|r| r.mean_features).collect();
            let mos: Vec<f64> = records.iter().map(|r| r.mos).collect();
            let model = train_fallback_regressor(&rows, &mos, *ridge_lambda)?;
            records
                .iter()
                .map(|r| {
                    let features = BrisqueFeatures {
                        values: r.mean_features,
                    };
                    brisque::predict(&features, &model)
                        .map(|s| (r.clip_id.clone(), s.value))
                        .map_err(|e| EvaluateError::InvalidConfig(e.to_string()))
                })
                .collect::<Result<_, _>>()?
        }
    };

    let rows = records
        .iter()
        .map(|r| PredictionRow {
            clip_id: r.clip_id.clone(),
            predicted: predicted[&r.clip_id],
            mos: r.mos,
            ms: r.pipeline_ms,
        })
        .collect();
    Ok((rows, failures))
}

/// Serialize prediction rows as `clip_id,predicted,mos,ms` CSV.
pub fn predictions_csv(rows: &[PredictionRow]) -> String {
    let mut out = String::from("clip_id,predicted,mos,ms\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.clip_id, row.predicted, row.mos, row.ms
        ));
    }
    out
}
