//! The `xgc` command-line interface: single-clip inspection (`classify`,
//! `score`, `sample`, `features`), dataset workflows (`calibrate`,
//! `evaluate`), and synthetic corpus generation (`fixtures`).
//!
//! Exit codes: 0 success, 1 unclassified failure, 2 input decode failure,
//! 3 configuration or precondition violation, 4 model loading failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use xgc_core::calibrate::{
    estimate_weights, segment_scores, train_fallback_regressor, CalibrateError,
    DEFAULT_N_SEGMENTS, DEFAULT_RIDGE_LAMBDA, DEFAULT_SEGMENT_STRIDE,
};
use xgc_core::classify::{confidence, Classification, ClassifyError};
use xgc_core::spatial::{central_crop_rect, fragment_sample, CropRect, FragmentCell};
use xgc_core::temporal::SamplingPlan;
use xgc_core::brisque::{SvrModel, FEATURE_COUNT};
use xgc_core::{Clip, QualityPredictor};

use crate::config::{load_config, ConfigError};
use crate::evaluate::{
    prediction_rows, predictions_csv, run_benchmark, BenchmarkOptions, EvaluateError,
    PredictorMode,
};
use crate::fixtures::{write_ablation_corpus, write_classifier_corpus, FixtureError};
use crate::io::{load_manifest, open_clip, open_input, ManifestEntry, ManifestError, MediaError};
use crate::model::{load_model, resolve_model_path, save_model, ModelError};
use crate::pipeline::{run_pipeline, PipelineConfig, PipelineError};

/// Success.
pub const EXIT_OK: i32 = 0;
/// Failure outside the classified categories (output IO, fixture writes).
pub const EXIT_FAILURE: i32 = 1;
/// Input media could not be decoded.
pub const EXIT_DECODE: i32 = 2;
/// Configuration or precondition violation.
pub const EXIT_CONFIG: i32 = 3;
/// Quality model missing, unreadable, or invalid.
pub const EXIT_MODEL: i32 = 4;

#[derive(Parser)]
#[command(
    name = "xgc",
    version,
    about = "Real-time no-reference video quality assessment: content classification, \
             confidence-driven spatial and temporal reduction, and NSS-based scoring."
)]
struct Cli {
    /// Configuration file (TOML); flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed for seeded stages (fragment offsets, split shuffles, fixtures).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Worker threads for dataset commands (0 = machine default).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Write the command's output here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Drop wall-clock fields from outputs, making reruns byte-identical.
    #[arg(long, global = true)]
    omit_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a clip (UGC/PGC/OGC) and print the confidence.
    Classify {
        /// A .y4m file or a directory of images.
        input: PathBuf,
        /// Quality model, needed once the hardware score saturates.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
    },
    /// Run the full pipeline on one clip and print its quality score.
    Score {
        /// A .y4m file or a directory of images.
        input: PathBuf,
        /// Quality model (required; also via XGC_MODEL or the config file).
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
        /// Frames to score (default from config, 10).
        #[arg(long, value_name = "N")]
        budget: Option<usize>,
        /// Ablation: skip cropping and fragment splicing.
        #[arg(long)]
        disable_spatial: bool,
        /// Ablation: sample frames uniformly at the same budget.
        #[arg(long)]
        disable_temporal: bool,
    },
    /// Dump the spatial sampling decisions (crop rectangle and per-cell
    /// fragment offsets) or, with --temporal, the frame sampling plan.
    Sample {
        /// A .y4m file or a directory of images.
        input: PathBuf,
        /// Emit the temporal sampling plan instead of the spatial layout.
        #[arg(long)]
        temporal: bool,
        /// Frame budget for the temporal plan.
        #[arg(long, value_name = "N")]
        budget: Option<usize>,
        /// Quality model, needed once the hardware score saturates.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
    },
    /// Extract feature vectors from the sampled frames.
    Features {
        /// A .y4m file or a directory of images.
        input: PathBuf,
        /// Frames to sample.
        #[arg(long, value_name = "N")]
        budget: Option<usize>,
        /// Quality model, needed once the hardware score saturates.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
    },
    /// Estimate per-segment importance weights from a scored dataset.
    Calibrate {
        /// Dataset manifest CSV.
        manifest: PathBuf,
        /// Temporal segments per clip.
        #[arg(long, value_name = "N")]
        n_segments: Option<usize>,
        /// Frame subsampling stride inside each segment.
        #[arg(long, value_name = "N")]
        stride: Option<usize>,
        /// Quality model; without one a ridge regressor is trained on the
        /// dataset's own features and used instead.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
        /// Write the model used for segment scoring here.
        #[arg(long, value_name = "FILE")]
        save_model: Option<PathBuf>,
        /// Ridge strength for the bootstrapped regressor.
        #[arg(long, value_name = "LAMBDA")]
        ridge_lambda: Option<f64>,
    },
    /// Benchmark predictions against subjective scores over repeated splits.
    Evaluate {
        /// Dataset manifest CSV.
        manifest: PathBuf,
        /// Number of random 80/20 splits.
        #[arg(long, value_name = "N")]
        repeats: Option<usize>,
        /// Quality model; without one a ridge regressor is trained on each
        /// repeat's train split.
        #[arg(long, value_name = "FILE")]
        model: Option<PathBuf>,
        /// Sanity mode: predictions equal the subjective scores.
        #[arg(long)]
        oracle: bool,
        /// Map predictions through a fitted logistic before PLCC.
        #[arg(long)]
        logistic_plcc: bool,
        /// Ablation: skip cropping and fragment splicing.
        #[arg(long)]
        disable_spatial: bool,
        /// Ablation: sample frames uniformly at the same budget.
        #[arg(long)]
        disable_temporal: bool,
        /// Also write per-clip predictions as CSV here.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
        /// Ridge strength for the fallback regressor.
        #[arg(long, value_name = "LAMBDA")]
        ridge_lambda: Option<f64>,
    },
    /// Generate the synthetic demonstration corpora.
    Fixtures {
        /// Directory the corpora are created under.
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
        /// Which corpus to generate.
        #[arg(long, value_enum, default_value_t = CorpusKind::All)]
        corpus: CorpusKind,
        /// Clip count (per side for the classifier corpus, total for the
        /// ablation corpus).
        #[arg(long, value_name = "N")]
        clips: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CorpusKind {
    /// Low-resolution/uneven vs high-resolution/even classifier corpus.
    Classifier,
    /// Score-correlated corpus for ablation comparisons.
    Ablation,
    /// Both corpora.
    All,
}

/// A failure carrying its exit code.
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn new(code: i32, message: impl ToString) -> Self {
        Self {
            code,
            message: message.to_string(),
        }
    }
}

impl From<MediaError> for CliError {
    fn from(e: MediaError) -> Self {
        CliError::new(EXIT_DECODE, e)
    }
}

impl From<ManifestError> for CliError {
    fn from(e: ManifestError) -> Self {
        // An unreadable manifest file is an input problem; a malformed one
        // is a precondition violation. Opening a directory succeeds on some
        // platforms, so read failures can also surface inside the CSV layer.
        let code = match &e {
            ManifestError::Io { .. } => EXIT_DECODE,
            ManifestError::Csv { source, .. } if source.is_io_error() => EXIT_DECODE,
            _ => EXIT_CONFIG,
        };
        CliError::new(code, e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::new(EXIT_CONFIG, e)
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::new(EXIT_MODEL, e)
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        let code = match &e {
            ClassifyError::PredictorRequired | ClassifyError::Predictor(_) => EXIT_MODEL,
            ClassifyError::Frame(_) => EXIT_DECODE,
            _ => EXIT_CONFIG,
        };
        CliError::new(code, e)
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        let code = match &e {
            PipelineError::Classify(ClassifyError::PredictorRequired)
            | PipelineError::Classify(ClassifyError::Predictor(_)) => EXIT_MODEL,
            _ if e.is_decode() => EXIT_DECODE,
            _ => EXIT_CONFIG,
        };
        CliError::new(code, e)
    }
}

impl From<EvaluateError> for CliError {
    fn from(e: EvaluateError) -> Self {
        let code = match e {
            EvaluateError::NoUsableClips => EXIT_DECODE,
            _ => EXIT_CONFIG,
        };
        CliError::new(code, e)
    }
}

impl From<CalibrateError> for CliError {
    fn from(e: CalibrateError) -> Self {
        CliError::new(EXIT_CONFIG, e)
    }
}

impl From<FixtureError> for CliError {
    fn from(e: FixtureError) -> Self {
        CliError::new(EXIT_FAILURE, e)
    }
}

impl From<xgc_core::spatial::SpatialError> for CliError {
    fn from(e: xgc_core::spatial::SpatialError) -> Self {
        CliError::new(EXIT_CONFIG, e)
    }
}

impl From<xgc_core::FrameError> for CliError {
    fn from(e: xgc_core::FrameError) -> Self {
        CliError::new(EXIT_DECODE, e)
    }
}

/// Parse the process arguments, run, and return the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.fragment.seed = seed;
    }
    if let Some(jobs) = cli.jobs {
        cfg.concurrency = jobs;
    }
    let output = cli.output.clone().or_else(|| cfg.output_path.clone());
    let json = dispatch(cli, &mut cfg)?;
    emit(output.as_deref(), &json)
}

fn dispatch(cli: Cli, cfg: &mut PipelineConfig) -> Result<String, CliError> {
    let seed = cli.seed.unwrap_or(0);
    let omit_timing = cli.omit_timing;
    match cli.command {
        Command::Classify { input, model } => cmd_classify(&input, model.as_deref(), cfg),
        Command::Score {
            input,
            model,
            budget,
            disable_spatial,
            disable_temporal,
        } => {
            if let Some(budget) = budget {
                cfg.temporal_budget = budget;
            }
            cfg.disable_spatial |= disable_spatial;
            cfg.disable_temporal |= disable_temporal;
            cmd_score(&input, model.as_deref(), cfg, omit_timing)
        }
        Command::Sample {
            input,
            temporal,
            budget,
            model,
        } => {
            if let Some(budget) = budget {
                cfg.temporal_budget = budget;
            }
            cmd_sample(&input, temporal, model.as_deref(), cfg)
        }
        Command::Features {
            input,
            budget,
            model,
        } => {
            if let Some(budget) = budget {
                cfg.temporal_budget = budget;
            }
            cmd_features(&input, model.as_deref(), cfg)
        }
        Command::Calibrate {
            manifest,
            n_segments,
            stride,
            model,
            save_model,
            ridge_lambda,
        } => cmd_calibrate(
            &manifest,
            n_segments.unwrap_or(DEFAULT_N_SEGMENTS),
            stride.unwrap_or(DEFAULT_SEGMENT_STRIDE),
            model.as_deref(),
            save_model.as_deref(),
            ridge_lambda.unwrap_or(DEFAULT_RIDGE_LAMBDA),
            cfg,
        ),
        Command::Evaluate {
            manifest,
            repeats,
            model,
            oracle,
            logistic_plcc,
            disable_spatial,
            disable_temporal,
            csv,
            ridge_lambda,
        } => {
            cfg.disable_spatial |= disable_spatial;
            cfg.disable_temporal |= disable_temporal;
            cmd_evaluate(
                &manifest,
                repeats.unwrap_or(10),
                seed,
                model.as_deref(),
                oracle,
                logistic_plcc,
                csv.as_deref(),
                ridge_lambda.unwrap_or(DEFAULT_RIDGE_LAMBDA),
                omit_timing,
                cfg,
            )
        }
        Command::Fixtures {
            out_dir,
            corpus,
            clips,
        } => cmd_fixtures(&out_dir, corpus, clips, seed),
    }
}

/// Write the payload to the destination file (atomically) or to stdout.
fn emit(output: Option<&Path>, payload: &str) -> Result<(), CliError> {
    match output {
        Some(path) => crate::write_atomic(path, payload.as_bytes())
            .map_err(|e| CliError::new(EXIT_FAILURE, format!("writing {}: {e}", path.display()))),
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

/// Clip identifier of a standalone input: the file stem, or the directory
/// name for image sequences.
fn clip_id_of(path: &Path) -> String {
    path.file_stem()
        .or_else(|| path.file_name())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "clip".to_string())
}

/// Load the model at the resolved path, if any path is configured.
fn maybe_load_model(
    flag: Option<&Path>,
    cfg: &PipelineConfig,
) -> Result<Option<SvrModel>, CliError> {
    match resolve_model_path(flag, cfg.model_path.as_deref()) {
        Some(path) => Ok(Some(load_model(&path)?)),
        None => Ok(None),
    }
}

/// Load the model, failing when none is configured anywhere.
fn require_model(flag: Option<&Path>, cfg: &PipelineConfig) -> Result<SvrModel, CliError> {
    maybe_load_model(flag, cfg)?.ok_or_else(|| ModelError::Missing.into())
}

fn to_pretty_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CliError::new(EXIT_FAILURE, format!("serializing output: {e}")))
}

fn classify_clip(
    clip: &dyn Clip,
    model: Option<&SvrModel>,
    cfg: &PipelineConfig,
) -> Result<Classification, CliError> {
    cfg.classifier.validate()?;
    Ok(confidence(
        clip,
        &cfg.classifier,
        model.map(|m| m as &dyn QualityPredictor),
    )?)
}

fn cmd_classify(
    input: &Path,
    model_flag: Option<&Path>,
    cfg: &PipelineConfig,
) -> Result<String, CliError> {
    let clip = open_input(input)?;
    let model = maybe_load_model(model_flag, cfg)?;
    let classification = classify_clip(clip.as_ref(), model.as_ref(), cfg)?;
    to_pretty_json(&classification)
}

#[derive(Serialize)]
struct ScoreOutput<'a> {
    clip_id: &'a str,
    x: f64,
    label: String,
    plan: &'a SamplingPlan,
    score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<f64>,
}

fn cmd_score(
    input: &Path,
    model_flag: Option<&Path>,
    cfg: &PipelineConfig,
    omit_timing: bool,
) -> Result<String, CliError> {
    let model = require_model(model_flag, cfg)?;
    let clip = open_input(input)?;
    let clip_id = clip_id_of(input);
    let outcome = run_pipeline(&clip_id, clip.as_ref(), cfg, Some(&model))?;
    let elapsed_ms = outcome.pipeline_ms + outcome.decode_ms;
    to_pretty_json(&ScoreOutput {
        clip_id: &clip_id,
        x: outcome.classification.x,
        label: outcome.classification.label.to_string(),
        plan: &outcome.plan,
        score: outcome.score.expect("scored run always has a score"),
        elapsed_ms: (!omit_timing).then_some(elapsed_ms),
    })
}

#[derive(Serialize)]
struct FragmentLayout {
    grid_size: usize,
    patch_size: usize,
    seed: u64,
    /// Patch origins inside the cropped frame; empty when the cropped frame
    /// is too small to host the mosaic.
    cells: Vec<FragmentCell>,
}

#[derive(Serialize)]
struct SampleOutput<'a> {
    clip_id: &'a str,
    x: f64,
    crop: CropRect,
    fragment: FragmentLayout,
}

fn cmd_sample(
    input: &Path,
    temporal: bool,
    model_flag: Option<&Path>,
    cfg: &PipelineConfig,
) -> Result<String, CliError> {
    let clip = open_input(input)?;
    let clip_id = clip_id_of(input);
    let model = maybe_load_model(model_flag, cfg)?;
    let classification = classify_clip(clip.as_ref(), model.as_ref(), cfg)?;

    if temporal {
        let plan = xgc_core::temporal::sample_frames(
            clip.frame_count(),
            cfg.temporal_budget,
            classification.x,
        );
        return to_pretty_json(&plan);
    }

    let rect = central_crop_rect(clip.height(), clip.width(), classification.x)?;
    let frame = clip.frame(0)?;
    let cropped = xgc_core::spatial::apply_crop(&frame, &rect)?;
    let side = cfg.fragment.grid_size * cfg.fragment.patch_size;
    let cells = if cropped.height() >= side && cropped.width() >= side {
        fragment_sample(&cropped, &cfg.fragment)?.cells
    } else {
        Vec::new()
    };
    to_pretty_json(&SampleOutput {
        clip_id: &clip_id,
        x: classification.x,
        crop: rect,
        fragment: FragmentLayout {
            grid_size: cfg.fragment.grid_size,
            patch_size: cfg.fragment.patch_size,
            seed: cfg.fragment.seed,
            cells,
        },
    })
}

#[derive(Serialize)]
struct FrameFeatures {
    /// Source frame index.
    index: usize,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct FeaturesOutput<'a> {
    clip_id: &'a str,
    x: f64,
    plan: &'a SamplingPlan,
    mean: &'a [f64],
    frames: Vec<FrameFeatures>,
}

fn cmd_features(
    input: &Path,
    model_flag: Option<&Path>,
    cfg: &PipelineConfig,
) -> Result<String, CliError> {
    let clip = open_input(input)?;
    let clip_id = clip_id_of(input);
    let model = maybe_load_model(model_flag, cfg)?;
    let outcome = run_pipeline(&clip_id, clip.as_ref(), cfg, model.as_ref())?;
    let frames = outcome
        .plan
        .indices
        .iter()
        .zip(&outcome.frame_features)
        .map(|(&index, values)| FrameFeatures {
            index,
            values: values.clone(),
        })
        .collect();
    to_pretty_json(&FeaturesOutput {
        clip_id: &clip_id,
        x: outcome.classification.x,
        plan: &outcome.plan,
        mean: &outcome.mean_features,
        frames,
    })
}

/// Feature rows for the calibrate bootstrap: per-clip mean features with the
/// clip's score, extracted concurrently. Decode failures are reported on
/// stderr and skipped.
fn feature_rows(
    entries: &[(&ManifestEntry, f64)],
    cfg: &PipelineConfig,
) -> Result<(Vec<[f64; FEATURE_COUNT]>, Vec<f64>), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.concurrency)
        .build()
        .map_err(|e| CliError::new(EXIT_CONFIG, e))?;
    let results: Vec<Result<([f64; FEATURE_COUNT], f64), String>> = pool.install(|| {
        use rayon::prelude::*;
        entries
            .par_iter()
            .map(|(entry, mos)| {
                let clip = open_clip(entry).map_err(|e| format!("{}: {e}", entry.clip_id))?;
                let outcome = run_pipeline(&entry.clip_id, clip.as_ref(), cfg, None)
                    .map_err(|e| format!("{}: {e}", entry.clip_id))?;
                let mut row = [0.0; FEATURE_COUNT];
                row.copy_from_slice(&outcome.mean_features);
                Ok((row, *mos))
            })
            .collect()
    });
    let mut rows = Vec::new();
    let mut mos = Vec::new();
    for result in results {
        match result {
            Ok((row, m)) => {
                rows.push(row);
                mos.push(m);
            }
            Err(message) => eprintln!("warning: skipping {message}"),
        }
    }
    Ok((rows, mos))
}

#[allow(clippy::too_many_arguments)]
fn cmd_calibrate(
    manifest_path: &Path,
    n_segments: usize,
    stride: usize,
    model_flag: Option<&Path>,
    save_model_path: Option<&Path>,
    ridge_lambda: f64,
    cfg: &PipelineConfig,
) -> Result<String, CliError> {
    cfg.validate()?;
    let manifest = load_manifest(manifest_path)?;
    let scored: Vec<_> = manifest.scored_entries().collect();

    // Segment scoring needs a frame-level predictor. Without a configured
    // model, train a ridge regressor on the dataset's own pipeline features.
    let model = match maybe_load_model(model_flag, cfg)? {
        Some(model) => model,
        None => {
            let (rows, mos) = feature_rows(&scored, cfg)?;
            train_fallback_regressor(&rows, &mos, ridge_lambda)?
        }
    };

    let mut dataset = Vec::new();
    for (entry, mos) in &scored {
        let clip = match open_clip(entry) {
            Ok(clip) => clip,
            Err(e) => {
                eprintln!("warning: skipping {}: {e}", entry.clip_id);
                continue;
            }
        };
        let series = segment_scores(clip.as_ref(), &entry.clip_id, n_segments, stride, &model)?;
        dataset.push((series, *mos));
    }
    let estimate = estimate_weights(&dataset)?;

    if let Some(path) = save_model_path {
        save_model(path, &model)?;
    }
    to_pretty_json(&estimate)
}

#[allow(clippy::too_many_arguments)]
fn cmd_evaluate(
    manifest_path: &Path,
    repeats: usize,
    seed: u64,
    model_flag: Option<&Path>,
    oracle: bool,
    logistic_plcc: bool,
    csv: Option<&Path>,
    ridge_lambda: f64,
    omit_timing: bool,
    cfg: &PipelineConfig,
) -> Result<String, CliError> {
    let manifest = load_manifest(manifest_path)?;
    let predictor = if oracle {
        PredictorMode::Oracle
    } else {
        match maybe_load_model(model_flag, cfg)? {
            Some(model) => PredictorMode::Model(model),
            None => PredictorMode::TrainFallback { ridge_lambda },
        }
    };
    let opts = BenchmarkOptions {
        repeats,
        seed,
        predictor,
        logistic_plcc,
        include_timing: !omit_timing,
    };
    let report = run_benchmark(&manifest, cfg, &opts)?;

    if let Some(path) = csv {
        let (rows, _) = prediction_rows(&manifest, cfg, &opts)?;
        let text = predictions_csv(&rows);
        crate::write_atomic(path, text.as_bytes())
            .map_err(|e| CliError::new(EXIT_FAILURE, format!("writing {}: {e}", path.display())))?;
    }
    to_pretty_json(&report)
}

#[derive(Serialize)]
struct FixturesOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    classifier_manifest: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ablation_manifest: Option<PathBuf>,
    model: PathBuf,
}

fn cmd_fixtures(
    out_dir: &Path,
    corpus: CorpusKind,
    clips: Option<usize>,
    seed: u64,
) -> Result<String, CliError> {
    let classifier_manifest = match corpus {
        CorpusKind::Classifier | CorpusKind::All => Some(write_classifier_corpus(
            &out_dir.join("classifier"),
            clips.unwrap_or(4),
            seed,
        )?),
        CorpusKind::Ablation => None,
    };
    let ablation_manifest = match corpus {
        CorpusKind::Ablation | CorpusKind::All => Some(write_ablation_corpus(
            &out_dir.join("ablation"),
            clips.unwrap_or(12),
            seed,
        )?),
        CorpusKind::Classifier => None,
    };
    let model_path = out_dir.join("model.json");
    save_model(&model_path, &crate::fixtures::fixture_model())?;
    to_pretty_json(&FixturesOutput {
        classifier_manifest,
        ablation_manifest,
        model: model_path,
    })
}
