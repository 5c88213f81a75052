//! Content-source classification: hardware score λ, confidence x, and the
//! UGC/PGC/OGC label that steers spatial and temporal downsampling.
//!
//! λ = min(mean key-frame luminance unevenness, resolution ratio). The
//! unevenness term 1 − σ/μ never exceeds 1, so λ saturates at exactly 1.0 —
//! reached by flat, evenly lit frames at or above the reference resolution,
//! the signature of professionally produced content. Below saturation the
//! clip is hardware-limited (UGC) and x = α·λ; at saturation the quality
//! branch takes over and x = α + (1−α)·q/100 from a no-reference quality
//! predictor, splitting PGC from OGC at a configurable threshold.

// f64 math under no_std; redundant (and flagged unused) whenever some
// dependency in the graph links std, as happens for test builds.
#[allow(unused_imports)]
use num_traits::Float as _;

use alloc::vec::Vec;

use crate::frame::{Clip, FrameError, LumaFrame};
use crate::{PredictorError, QualityPredictor};

/// Errors from classification.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    /// Configuration violates an invariant.
    #[error("invalid classifier config: {0}")]
    InvalidConfig(&'static str),
    /// A clip or reference dimension is zero.
    #[error("dimensions must be positive")]
    ZeroDimension,
    /// The quality branch was reached without a quality predictor.
    #[error("quality predictor required once the hardware score saturates")]
    PredictorRequired,
    /// Frame access failed.
    #[error(transparent)]
    Frame(#[from] FrameError),
    /// The quality predictor failed.
    #[error(transparent)]
    Predictor(#[from] PredictorError),
}

/// Classifier parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ClassifierConfig {
    /// Confidence budget α split between the two branches; in (0, 1).
    pub alpha: f64,
    /// Reference height of the resolution bound.
    pub h_m: usize,
    /// Reference width of the resolution bound.
    pub w_m: usize,
    /// Number of evenly spaced key frames to average over.
    pub key_frame_count: usize,
    /// Mean-luminance floor below which a frame counts as fully uneven.
    pub epsilon_mean: f64,
    /// Confidence threshold separating PGC (below) from OGC; in (0.5, 1].
    pub pgc_ogc_threshold: f64,
    /// Use 100 − q instead of q in the quality branch, so that cleaner
    /// content maps closer to the OGC end. Off by default: the literal rule
    /// raises x with the distortion score.
    pub invert_quality: bool,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            h_m: 720,
            w_m: 1280,
            key_frame_count: 3,
            epsilon_mean: 1e-6,
            pgc_ogc_threshold: 0.75,
            invert_quality: false,
        }
    }
}

impl ClassifierConfig {
    /// Checks the config invariants.
    pub fn validate(&self) -> Result<(), ClassifyError> {
        if !(self.alpha.is_finite() && 0.0 < self.alpha && self.alpha < 1.0) {
            return Err(ClassifyError::InvalidConfig("alpha must lie in (0, 1)"));
        }
        if self.h_m == 0 || self.w_m == 0 {
            return Err(ClassifyError::InvalidConfig("h_m and w_m must be positive"));
        }
        if self.key_frame_count == 0 {
            return Err(ClassifyError::InvalidConfig("key_frame_count must be at least 1"));
        }
        if !(self.epsilon_mean.is_finite() && self.epsilon_mean >= 0.0) {
            return Err(ClassifyError::InvalidConfig("epsilon_mean must be non-negative"));
        }
        if !(self.pgc_ogc_threshold.is_finite()
            && 0.5 < self.pgc_ogc_threshold
            && self.pgc_ogc_threshold <= 1.0)
        {
            return Err(ClassifyError::InvalidConfig(
                "pgc_ogc_threshold must lie in (0.5, 1]",
            ));
        }
        Ok(())
    }
}

/// Content-source label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "UPPERCASE"))]
pub enum ContentLabel {
    /// User-generated content (hardware-limited).
    Ugc,
    /// Professionally-generated content.
    Pgc,
    /// Occupationally-generated content.
    Ogc,
}

impl core::fmt::Display for ContentLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            ContentLabel::Ugc => "UGC",
            ContentLabel::Pgc => "PGC",
            ContentLabel::Ogc => "OGC",
        })
    }
}

/// Which branch of the confidence rule produced x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Branch {
    /// λ below saturation: x derives from hardware capability alone.
    HardwareLimited,
    /// λ saturated at 1: x derives from the quality predictor.
    QualityLimited,
}

impl core::fmt::Display for Branch {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Branch::HardwareLimited => "hardware_limited",
            Branch::QualityLimited => "quality_limited",
        })
    }
}

/// The classification outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Classification {
    /// Hardware score λ ∈ [0, 1].
    pub lambda: f64,
    /// Confidence x ∈ [0, 1].
    pub x: f64,
    /// Content-source label.
    pub label: ContentLabel,
    /// Branch that produced x.
    pub branch: Branch,
}

/// Luminance unevenness 1 − σ/μ over all samples (population σ), clamped to
/// ≥ 0; a mean below `epsilon_mean` counts as fully uneven (0.0).
///
/// Constant frames short-circuit to exactly 1.0: summation round-off must
/// not leave a phantom σ that would pull λ off its saturation point.
pub fn unevenness_term(frame: &LumaFrame, epsilon_mean: f64) -> f64 {
    let samples = frame.samples();
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if mean < epsilon_mean {
        return 0.0;
    }
    let (mut lo, mut hi) = (samples[0], samples[0]);
    for &v in samples {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        return 1.0;
    }
    let var = samples.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (1.0 - var.sqrt() / mean).max(0.0)
}

/// Resolution ratio √(h·w)/√(h_m·w_m), unclamped (exceeds 1 above the
/// reference bound).
pub fn resolution_term(
    h: usize,
    w: usize,
    h_m: usize,
    w_m: usize,
) -> Result<f64, ClassifyError> {
    if h == 0 || w == 0 || h_m == 0 || w_m == 0 {
        return Err(ClassifyError::ZeroDimension);
    }
    Ok(((h * w) as f64).sqrt() / ((h_m * w_m) as f64).sqrt())
}

/// Indices of `count` key frames evenly spaced over [0, frame_count − 1],
/// including both ends; a single frame (or count 1) yields frame 0.
/// Duplicates appear when the clip is shorter than the requested count.
pub fn key_frame_indices(frame_count: usize, count: usize) -> Vec<usize> {
    if frame_count == 0 || count == 0 {
        return Vec::new();
    }
    if count == 1 || frame_count == 1 {
        return alloc::vec![0; count];
    }
    let span = (frame_count - 1) as f64;
    (0..count)
        .map(|k| (k as f64 * span / (count - 1) as f64).round() as usize)
        .collect()
}

/// Hardware score λ = min(mean key-frame unevenness, resolution ratio).
pub fn hardware_lambda(clip: &dyn Clip, cfg: &ClassifierConfig) -> Result<f64, ClassifyError> {
    cfg.validate()?;
    let resolution = resolution_term(clip.height(), clip.width(), cfg.h_m, cfg.w_m)?;
    let keys = key_frame_indices(clip.frame_count(), cfg.key_frame_count);
    let mut sum = 0.0;
    for &index in &keys {
        let frame = clip.frame(index)?;
        sum += unevenness_term(&frame, cfg.epsilon_mean);
    }
    Ok((sum / keys.len() as f64).min(resolution))
}

/// Classifies a clip: hardware branch (λ < 1) sets x = α·λ and labels UGC;
/// at saturation (λ = 1) the quality branch sets x = α + (1−α)·q/100 from
/// the mean predictor score over the key frames (each score clamped to
/// [0, 100]) and splits PGC/OGC at the configured threshold.
///
/// The predictor sees full frames — classification happens before any
/// cropping. It is only consulted on the quality branch; `None` is fine for
/// hardware-limited clips.
pub fn confidence(
    clip: &dyn Clip,
    cfg: &ClassifierConfig,
    quality: Option<&dyn QualityPredictor>,
) -> Result<Classification, ClassifyError> {
    let lambda = hardware_lambda(clip, cfg)?;
    if lambda < 1.0 {
        return Ok(Classification {
            lambda,
            x: (cfg.alpha * lambda).clamp(0.0, cfg.alpha),
            label: ContentLabel::Ugc,
            branch: Branch::HardwareLimited,
        });
    }
    let predictor = quality.ok_or(ClassifyError::PredictorRequired)?;
    let keys = key_frame_indices(clip.frame_count(), cfg.key_frame_count);
    let mut sum = 0.0;
    for &index in &keys {
        let frame = clip.frame(index)?;
        sum += predictor.score_frame(&frame)?.clamp(0.0, 100.0);
    }
    let mut q = sum / keys.len() as f64;
    if cfg.invert_quality {
        q = 100.0 - q;
    }
    let x = (cfg.alpha + (1.0 - cfg.alpha) * q / 100.0).clamp(cfg.alpha, 1.0);
    let label = if x < cfg.pgc_ogc_threshold {
        ContentLabel::Pgc
    } else {
        ContentLabel::Ogc
    };
    Ok(Classification {
        lambda,
        x,
        label,
        branch: Branch::QualityLimited,
    })
}
