//! Weight calibration: per-segment quality series, rank-correlation weight
//! estimation, recovery of the confidence x from the first/last weight
//! ratio, and a ridge-regression fallback trainer for the score predictor.

use alloc::string::String;
use alloc::vec::Vec;

use crate::brisque::{features, predict, BrisqueError, SvrKernel, SvrModel, FEATURE_COUNT};
use crate::frame::{Clip, FrameError};
use crate::stats::{srocc, StatsError};

/// Default number of contiguous segments a clip is split into.
pub const DEFAULT_N_SEGMENTS: usize = 10;
/// Default frame subsampling stride inside each segment.
pub const DEFAULT_SEGMENT_STRIDE: usize = 5;
/// Floor applied to per-segment rank correlations before normalization
/// (the downstream log-allocation needs strictly positive weights).
pub const WEIGHT_FLOOR: f64 = 0.01;
/// Default ridge regularization for the fallback regressor.
pub const DEFAULT_RIDGE_LAMBDA: f64 = 1e-3;

/// Errors from calibration.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalibrateError {
    /// A clip has fewer frames than requested segments.
    #[error("clip has {frame_count} frames but {n_segments} segments were requested")]
    TooFewFrames {
        /// Frames in the clip.
        frame_count: usize,
        /// Requested segment count.
        n_segments: usize,
    },
    /// Fewer than two segments requested.
    #[error("need at least 2 segments, got {0}")]
    TooFewSegments(usize),
    /// Subsampling stride is zero.
    #[error("segment stride must be at least 1")]
    ZeroStride,
    /// Weight estimation needs at least five clips.
    #[error("need at least 5 clips, got {0}")]
    TooFewClips(usize),
    /// Clips disagree on segment count.
    #[error("clip {clip_id} has {got} segments, expected {expected}")]
    MismatchedSegments {
        /// Offending clip.
        clip_id: String,
        /// Segment count of the first clip.
        expected: usize,
        /// Segment count found.
        got: usize,
    },
    /// The fallback trainer needs at least ten samples.
    #[error("need at least 10 training samples, got {0}")]
    TooFewSamples(usize),
    /// Feature rows and target values differ in count.
    #[error("feature rows ({features}) and targets ({targets}) differ")]
    MismatchedLengths {
        /// Feature row count.
        features: usize,
        /// Target count.
        targets: usize,
    },
    /// A training input is NaN or infinite.
    #[error("training inputs must be finite")]
    NonFiniteInput,
    /// Regularization is negative or not finite.
    #[error("ridge lambda must be a non-negative finite number")]
    InvalidLambda,
    /// The normal equations could not be solved.
    #[error("ridge system is singular; increase lambda")]
    SingularSystem,
    /// Score prediction failed.
    #[error(transparent)]
    Brisque(#[from] BrisqueError),
    /// Frame access failed.
    #[error(transparent)]
    Frame(#[from] FrameError),
    /// Correlation failed.
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Per-segment mean quality scores of one clip.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SegmentSeries {
    /// Identifier of the source clip.
    pub clip_id: String,
    /// Mean score per segment; length is the segment count (≥ 2).
    pub scores: Vec<f64>,
}

impl SegmentSeries {
    /// Number of segments.
    pub fn n_segments(&self) -> usize {
        self.scores.len()
    }
}

/// Normalized per-segment weights and the confidence they imply.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightEstimate {
    /// Positive weights summing to 1.
    pub weights: Vec<f64>,
    /// ω_first / ω_last.
    pub ratio_first_last: f64,
    /// Confidence recovered from the ratio via [`x_from_ratio`].
    pub x_implied: f64,
    /// Segment count of the dataset.
    pub n_segments: usize,
    /// Number of clips the estimate was computed from.
    pub n_clips: usize,
}

/// Splits `clip` into `n_segments` contiguous equal segments (remainder
/// frames extend the last), scores every `stride`-th frame from each
/// segment's start with the model, and returns the per-segment mean scores.
pub fn segment_scores(
    clip: &dyn Clip,
    clip_id: &str,
    n_segments: usize,
    stride: usize,
    model: &SvrModel,
) -> Result<SegmentSeries, CalibrateError> {
    if n_segments < 2 {
        return Err(CalibrateError::TooFewSegments(n_segments));
    }
    if stride == 0 {
        return Err(CalibrateError::ZeroStride);
    }
    let frame_count = clip.frame_count();
    if frame_count < n_segments {
        return Err(CalibrateError::TooFewFrames { frame_count, n_segments });
    }
    let seg_len = frame_count / n_segments;
    let mut scores = Vec::with_capacity(n_segments);
    for segment in 0..n_segments {
        let start = segment * seg_len;
        let end = if segment + 1 == n_segments {
            frame_count
        } else {
            start + seg_len
        };
        let (mut sum, mut count) = (0.0, 0usize);
        let mut index = start;
        while index < end {
            let frame = clip.frame(index)?;
            sum += predict(&features(&frame)?, model)?.value;
            count += 1;
            index += stride;
        }
        scores.push(sum / count as f64);
    }
    Ok(SegmentSeries { clip_id: String::from(clip_id), scores })
}

/// Estimates per-segment weights from how well each segment's scores rank
/// clips against their MOS: ω_i ∝ max(0.01, SRoCC(Q_i across clips, MOS)),
/// normalized to sum 1.
pub fn estimate_weights(
    dataset: &[(SegmentSeries, f64)],
) -> Result<WeightEstimate, CalibrateError> {
    let n_clips = dataset.len();
    if n_clips < 5 {
        return Err(CalibrateError::TooFewClips(n_clips));
    }
    let n_segments = dataset[0].0.n_segments();
    if n_segments < 2 {
        return Err(CalibrateError::TooFewSegments(n_segments));
    }
    for (series, _) in dataset {
        if series.n_segments() != n_segments {
            return Err(CalibrateError::MismatchedSegments {
                clip_id: series.clip_id.clone(),
                expected: n_segments,
                got: series.n_segments(),
            });
        }
    }
    let mos: Vec<f64> = dataset.iter().map(|(_, m)| *m).collect();
    let mut weights = Vec::with_capacity(n_segments);
    for segment in 0..n_segments {
        let series: Vec<f64> = dataset.iter().map(|(s, _)| s.scores[segment]).collect();
        let correlation = srocc(&series, &mos)?;
        weights.push(correlation.value.max(WEIGHT_FLOOR));
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let ratio_first_last = weights[0] / weights[n_segments - 1];
    Ok(WeightEstimate {
        x_implied: x_from_ratio(ratio_first_last),
        ratio_first_last,
        weights,
        n_segments,
        n_clips,
    })
}

/// Recovers the confidence from the first/last weight ratio:
/// x = clamp((5/ratio − 3)/3, 0, 1). Inverse of [`ratio_from_x`].
pub fn x_from_ratio(ratio_first_last: f64) -> f64 {
    ((5.0 / ratio_first_last - 3.0) / 3.0).clamp(0.0, 1.0)
}

/// The forward map: first/last density weight ratio 5/(3+3x).
pub fn ratio_from_x(x: f64) -> f64 {
    5.0 / (3.0 + 3.0 * x.clamp(0.0, 1.0))
}

/// Trains the fallback linear predictor by ridge regression on min-max
/// scaled features. A constant feature column scales to −1 (its range is
/// widened by one unit so the model file stays valid). Features and targets
/// are centered before solving, so a constant target yields an exactly
/// constant predictor.
pub fn train_fallback_regressor(
    rows: &[[f64; FEATURE_COUNT]],
    mos: &[f64],
    ridge_lambda: f64,
) -> Result<SvrModel, CalibrateError> {
    let n = rows.len();
    if n != mos.len() {
        return Err(CalibrateError::MismatchedLengths { features: n, targets: mos.len() });
    }
    if n < 10 {
        return Err(CalibrateError::TooFewSamples(n));
    }
    if !(ridge_lambda.is_finite() && ridge_lambda >= 0.0) {
        return Err(CalibrateError::InvalidLambda);
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) || mos.iter().any(|v| !v.is_finite()) {
        return Err(CalibrateError::NonFiniteInput);
    }

    let mut feature_min = [f64::INFINITY; FEATURE_COUNT];
    let mut feature_max = [f64::NEG_INFINITY; FEATURE_COUNT];
    for row in rows {
        for (i, &v) in row.iter().enumerate() {
            feature_min[i] = feature_min[i].min(v);
            feature_max[i] = feature_max[i].max(v);
        }
    }
    for i in 0..FEATURE_COUNT {
        if feature_max[i] == feature_min[i] {
            feature_max[i] = feature_min[i] + 1.0;
        }
    }

    let scaled: Vec<[f64; FEATURE_COUNT]> = rows
        .iter()
        .map(|row| {
            core::array::from_fn(|i| {
                -1.0 + 2.0 * (row[i] - feature_min[i]) / (feature_max[i] - feature_min[i])
            })
        })
        .collect();

    let nf = n as f64;
    let mut x_mean = [0.0; FEATURE_COUNT];
    for row in &scaled {
        for (m, &v) in x_mean.iter_mut().zip(row) {
            *m += v / nf;
        }
    }
    let y_mean = mos.iter().sum::<f64>() / nf;

    // Normal equations on centered data: (XcᵀXc + λI)β = Xcᵀyc.
    let d = FEATURE_COUNT;
    let mut gram = alloc::vec![0.0; d * d];
    let mut rhs = alloc::vec![0.0; d];
    for (row, &y) in scaled.iter().zip(mos) {
        let yc = y - y_mean;
        for i in 0..d {
            let xi = row[i] - x_mean[i];
            rhs[i] += xi * yc;
            for j in 0..d {
                gram[i * d + j] += xi * (row[j] - x_mean[j]);
            }
        }
    }
    for i in 0..d {
        gram[i * d + i] += ridge_lambda;
    }
    let beta = crate::linalg::solve_dense(gram, rhs).ok_or(CalibrateError::SingularSystem)?;
    let bias = y_mean - x_mean.iter().zip(&beta).map(|(&m, &b)| m * b).sum::<f64>();

    Ok(SvrModel {
        kernel: SvrKernel::Linear { weights: beta, bias },
        feature_min: feature_min.to_vec(),
        feature_max: feature_max.to_vec(),
    })
}
