//! The end-to-end scoring pipeline: classification, confidence-driven
//! spatial reduction, non-uniform temporal sampling, and per-frame quality
//! prediction, with decode time accounted separately from processing time.

use std::borrow::Cow;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use xgc_core::brisque::{self, SvrModel, FEATURE_COUNT};
use xgc_core::classify::{confidence, Classification, ClassifierConfig, ClassifyError};
use xgc_core::spatial::{
    apply_crop, central_crop_rect, fragment_sample, CropRect, FragmentConfig, SpatialError,
};
use xgc_core::temporal::{sample_frames, SamplingPlan};
use xgc_core::{Clip, FrameError, LumaFrame};

/// Confidence value whose sampling density is exactly flat, used when the
/// temporal stage is ablated: the density 5 + (3x − 2)t is constant at
/// x = 2/3, so the same sampler then draws uniformly at the same budget.
pub const UNIFORM_DENSITY_X: f64 = 2.0 / 3.0;

/// Everything a pipeline run needs besides the media itself.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Content-classification parameters.
    pub classifier: ClassifierConfig,
    /// Fragment-mosaic parameters.
    pub fragment: FragmentConfig,
    /// Frames scored per clip.
    pub temporal_budget: usize,
    /// Ablation: skip cropping and fragment splicing, score whole frames.
    pub disable_spatial: bool,
    /// Ablation: sample uniformly instead of density-weighted, same budget.
    pub disable_temporal: bool,
    /// Quality model file; `None` defers to `XGC_MODEL` or leaves the
    /// pipeline feature-only.
    pub model_path: Option<PathBuf>,
    /// Default destination for command output; `None` means stdout.
    pub output_path: Option<PathBuf>,
    /// Worker threads for dataset runs; 0 picks the machine default.
    pub concurrency: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            classifier: ClassifierConfig::default(),
            fragment: FragmentConfig::default(),
            temporal_budget: 10,
            disable_spatial: false,
            disable_temporal: false,
            model_path: None,
            output_path: None,
            concurrency: 0,
        }
    }
}

impl PipelineConfig {
    /// Check parameter preconditions before any media is touched.
    pub fn validate(&self) -> Result<(), PipelineError> {
        self.classifier.validate()?;
        if self.temporal_budget == 0 {
            return Err(PipelineError::InvalidConfig(
                "temporal_budget must be at least 1".into(),
            ));
        }
        if self.fragment.grid_size == 0 || self.fragment.patch_size == 0 {
            return Err(PipelineError::InvalidConfig(
                "fragment grid_size and patch_size must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Name of the ablation this configuration encodes: which stages are
    /// disabled.
    pub fn ablation_label(&self) -> &'static str {
        match (self.disable_spatial, self.disable_temporal) {
            (false, false) => "None",
            (true, false) => "Spatial",
            (false, true) => "Temporal",
            (true, true) => "All",
        }
    }
}

/// Pipeline failure.
#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    /// Classification failed (includes a missing-but-required predictor).
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    /// Cropping or fragment splicing failed.
    #[error(transparent)]
    Spatial(#[from] SpatialError),
    /// Feature extraction or prediction failed.
    #[error(transparent)]
    Brisque(#[from] brisque::BrisqueError),
    /// Frame decode failed.
    #[error(transparent)]
    Frame(#[from] FrameError),
    /// Configuration violates a precondition.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl PipelineError {
    /// True when the failure is a decode problem rather than a parameter or
    /// model problem; callers treat these as data errors.
    pub fn is_decode(&self) -> bool {
        matches!(
            self,
            PipelineError::Frame(_)
                | PipelineError::Classify(ClassifyError::Frame(_))
                | PipelineError::Brisque(brisque::BrisqueError::Frame(_))
        )
    }
}

/// A [`Clip`] wrapper that accumulates the time spent inside `frame()`, so a
/// caller can report processing time net of decoding.
pub struct TimedClip<'a> {
    inner: &'a dyn Clip,
    decode_nanos: AtomicU64,
}

impl<'a> TimedClip<'a> {
    /// Wrap a clip, starting from zero accumulated decode time.
    pub fn new(inner: &'a dyn Clip) -> Self {
        Self {
            inner,
            decode_nanos: AtomicU64::new(0),
        }
    }

    /// Total time spent decoding frames, in milliseconds.
    pub fn decode_ms(&self) -> f64 {
        self.decode_nanos.load(Ordering::Relaxed) as f64 / 1e6
    }
}

impl Clip for TimedClip<'_> {
    fn frame_count(&self) -> usize {
        self.inner.frame_count()
    }

    fn width(&self) -> usize {
        self.inner.width()
    }

    fn height(&self) -> usize {
        self.inner.height()
    }

    fn bit_depth(&self) -> u8 {
        self.inner.bit_depth()
    }

    fn frame(&self, index: usize) -> Result<Cow<'_, LumaFrame>, FrameError> {
        let start = Instant::now();
        let result = self.inner.frame(index);
        self.decode_nanos
            .fetch_add(start.elapsed().as_nanos() as u64, Ordering::Relaxed);
        result
    }

    fn fps(&self) -> Option<f64> {
        self.inner.fps()
    }
}

/// Result of scoring one clip.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    /// Identifier the caller supplied.
    pub clip_id: String,
    /// Classification stage output.
    pub classification: Classification,
    /// Crop applied to every scored frame; `None` when spatial processing is
    /// disabled or the frame is too small to crop.
    pub crop: Option<CropRect>,
    /// Frames selected for scoring.
    pub plan: SamplingPlan,
    /// Mean feature vector over the scored frames.
    pub mean_features: Vec<f64>,
    /// Feature vector of each scored frame, in plan order.
    pub frame_features: Vec<Vec<f64>>,
    /// Per-frame predictions, in plan order, when a model was supplied.
    pub frame_scores: Option<Vec<f64>>,
    /// Mean of `frame_scores`, clamped to [0, 100].
    pub score: Option<f64>,
    /// Wall-clock processing time net of decoding, in milliseconds.
    pub pipeline_ms: f64,
    /// Time spent decoding frames, in milliseconds.
    pub decode_ms: f64,
}

/// Run the full pipeline over one clip. `model` feeds both the
/// quality-limited classification branch and final scoring; without it the
/// run is feature-only and `score` is `None` (a clip that *needs* the
/// predictor to classify still fails).
pub fn run_pipeline(
    clip_id: &str,
    clip: &dyn Clip,
    cfg: &PipelineConfig,
    model: Option<&SvrModel>,
) -> Result<PipelineOutcome, PipelineError> {
    cfg.validate()?;
    let timed = TimedClip::new(clip);
    let wall = Instant::now();

    let classification = confidence(
        &timed,
        &cfg.classifier,
        model.map(|m| m as &dyn xgc_core::QualityPredictor),
    )?;

    let plan = if cfg.disable_temporal {
        sample_frames(timed.frame_count(), cfg.temporal_budget, UNIFORM_DENSITY_X)
    } else {
        sample_frames(timed.frame_count(), cfg.temporal_budget, classification.x)
    };

    let crop = if cfg.disable_spatial {
        None
    } else {
        Some(central_crop_rect(
            timed.height(),
            timed.width(),
            classification.x,
        )?)
    };

    let mosaic_side = cfg.fragment.grid_size * cfg.fragment.patch_size;
    let mut mean_features = vec![0.0; FEATURE_COUNT];
    let mut frame_features = Vec::with_capacity(plan.indices.len());
    let mut frame_scores = model.map(|_| Vec::with_capacity(plan.indices.len()));
    for &index in &plan.indices {
        let frame = timed.frame(index)?;
        let reduced = reduce_frame(&frame, crop.as_ref(), &cfg.fragment, mosaic_side)?;
        let features = brisque::features(&reduced)?;
        for (acc, &v) in mean_features.iter_mut().zip(features.values.iter()) {
            *acc += v;
        }
        if let (Some(scores), Some(model)) = (&mut frame_scores, model) {
            scores.push(brisque::predict(&features, model)?.value);
        }
        frame_features.push(features.values.to_vec());
    }
    let n = plan.indices.len() as f64;
    for v in &mut mean_features {
        *v /= n;
    }
    let score = frame_scores
        .as_ref()
        .map(|s| (s.iter().sum::<f64>() / s.len() as f64).clamp(0.0, 100.0));

    let decode_ms = timed.decode_ms();
    let pipeline_ms = (wall.elapsed().as_secs_f64() * 1e3 - decode_ms).max(0.0);
    Ok(PipelineOutcome {
        clip_id: clip_id.to_string(),
        classification,
        crop,
        plan,
        mean_features,
        frame_features,
        frame_scores,
        score,
        pipeline_ms,
        decode_ms,
    })
}

/// Spatial reduction of one frame: crop when a rect is given, then splice a
/// fragment mosaic when the result can host one. Frames smaller than the
/// mosaic are scored whole — fragmentation is a cost optimization and must
/// not reject small inputs outright.
fn reduce_frame(
    frame: &LumaFrame,
    crop: Option<&CropRect>,
    fragment: &FragmentConfig,
    mosaic_side: usize,
) -> Result<LumaFrame, PipelineError> {
    let cropped = match crop {
        Some(rect) => Cow::Owned(apply_crop(frame, rect)?),
        None => Cow::Borrowed(frame),
    };
    if crop.is_some() && cropped.height() >= mosaic_side && cropped.width() >= mosaic_side {
        Ok(fragment_sample(&cropped, fragment)?.frame)
    } else {
        Ok(cropped.into_owned())
    }
}
