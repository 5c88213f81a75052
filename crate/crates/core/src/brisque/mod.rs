//! Natural-scene-statistics quality model: MSCN coefficients, GGD/AGGD
//! feature fitting, and SVR score prediction on a 0–100 distortion scale
//! (higher = more distorted).
//!
//! The numeric conventions are frozen so independent implementations agree
//! bit-for-bit: 7×7 Gaussian window with σ = 7/6 normalized to unit sum,
//! symmetric reflect padding, stabilizer C = 1/255 in normalized luma units
//! (the conventional C = 1 on the 0–255 scale), two scales related by 2×2
//! box-average downsampling, and a γ ∈ [0.2, 10] step-0.001 moment-matching
//! grid.

mod fit;
mod svr;

pub use fit::{aggd_fit, ggd_fit};
pub use svr::{predict, SvrKernel, SvrModel};

// f64 math under no_std; redundant (and flagged unused) whenever some
// dependency in the graph links std, as happens for test builds.
#[allow(unused_imports)]
use num_traits::Float as _;

use alloc::vec::Vec;

use crate::frame::{Clip, FrameError, LumaFrame};
use crate::temporal::SamplingPlan;
use crate::{PredictorError, QualityPredictor};

/// Stabilizer added to σ in the MSCN denominator (1 on the 0–255 scale).
pub const MSCN_STABILIZER: f64 = 1.0 / 255.0;

/// Length of the feature vector (18 per scale × 2 scales).
pub const FEATURE_COUNT: usize = 36;

/// Errors from feature extraction and prediction.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BrisqueError {
    /// Frame smaller than the operation requires.
    #[error("frame {width}x{height} is smaller than the required {min}x{min}")]
    FrameTooSmall {
        /// Frame width.
        width: usize,
        /// Frame height.
        height: usize,
        /// Minimum side length.
        min: usize,
    },
    /// Field smaller than 2×2, so no neighbor products exist.
    #[error("field {width}x{height} has no pairwise neighbors")]
    FieldTooSmall {
        /// Field width.
        width: usize,
        /// Field height.
        height: usize,
    },
    /// The sampling plan selects no frames.
    #[error("sampling plan is empty")]
    EmptyPlan,
    /// A model invariant is violated.
    #[error("invalid model: {0}")]
    InvalidModel(&'static str),
    /// Frame access failed.
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// A row-major grid of real values with frame-like geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

/// Mean-subtracted contrast-normalized coefficients of a frame.
pub type MscnField = ScalarField;

impl ScalarField {
    fn new(width: usize, height: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), width * height);
        Self { width, height, values }
    }

    /// Field width.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Field height.
    pub fn height(&self) -> usize {
        self.height
    }

    /// All values, row-major.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at (row, col).
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }
}

/// Minimum frame side for one filtering scale.
const MIN_SIDE: usize = 7;

/// The normalized 7-tap Gaussian with σ = 7/6. Applying the normalized 1-D
/// kernel along rows then columns equals the normalized 2-D kernel (the
/// outer product of unit-sum factors has unit sum).
fn gaussian_taps() -> [f64; 7] {
    let sigma = 7.0 / 6.0;
    let mut taps = [0.0; 7];
    let mut sum = 0.0;
    for (i, tap) in taps.iter_mut().enumerate() {
        let d = i as f64 - 3.0;
        *tap = (-d * d / (2.0 * sigma * sigma)).exp();
        sum += *tap;
    }
    for tap in &mut taps {
        *tap /= sum;
    }
    taps
}

/// Symmetric reflection with the edge sample repeated: −1 ↦ 0, n ↦ n−1.
fn reflect(index: isize, len: usize) -> usize {
    let n = len as isize;
    let j = if index < 0 {
        -index - 1
    } else if index >= n {
        2 * n - 1 - index
    } else {
        index
    };
    j as usize
}

/// Separable 7×7 Gaussian filtering with reflect padding.
fn gaussian_filter(values: &[f64], width: usize, height: usize) -> Vec<f64> {
    let taps = gaussian_taps();
    let mut rows = alloc::vec![0.0; values.len()];
    for r in 0..height {
        let row = &values[r * width..(r + 1) * width];
        for c in 0..width {
            let mut acc = 0.0;
            for (k, &t) in taps.iter().enumerate() {
                acc += t * row[reflect(c as isize + k as isize - 3, width)];
            }
            rows[r * width + c] = acc;
        }
    }
    let mut out = alloc::vec![0.0; values.len()];
    for c in 0..width {
        for r in 0..height {
            let mut acc = 0.0;
            for (k, &t) in taps.iter().enumerate() {
                acc += t * rows[reflect(r as isize + k as isize - 3, height) * width + c];
            }
            out[r * width + c] = acc;
        }
    }
    out
}

/// Gaussian-weighted local mean μ and deviation σ = √(max(0, E[I²] − μ²)).
pub fn local_stats(frame: &LumaFrame) -> Result<(ScalarField, ScalarField), BrisqueError> {
    let (w, h) = (frame.width(), frame.height());
    if w < MIN_SIDE || h < MIN_SIDE {
        return Err(BrisqueError::FrameTooSmall { width: w, height: h, min: MIN_SIDE });
    }
    let mu = gaussian_filter(frame.samples(), w, h);
    let squared: Vec<f64> = frame.samples().iter().map(|&v| v * v).collect();
    let mean_sq = gaussian_filter(&squared, w, h);
    let sigma: Vec<f64> = mu
        .iter()
        .zip(&mean_sq)
        .map(|(&m, &s)| (s - m * m).max(0.0).sqrt())
        .collect();
    Ok((ScalarField::new(w, h, mu), ScalarField::new(w, h, sigma)))
}

/// MSCN coefficients (I − μ)/(σ + C).
///
/// A constant frame short-circuits to exact zeros: convolution round-off
/// must not leave phantom structure in flat regions.
pub fn mscn(frame: &LumaFrame) -> Result<MscnField, BrisqueError> {
    let (w, h) = (frame.width(), frame.height());
    if w < MIN_SIDE || h < MIN_SIDE {
        return Err(BrisqueError::FrameTooSmall { width: w, height: h, min: MIN_SIDE });
    }
    let samples = frame.samples();
    let (mut lo, mut hi) = (samples[0], samples[0]);
    for &v in samples {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        return Ok(ScalarField::new(w, h, alloc::vec![0.0; samples.len()]));
    }
    let (mu, sigma) = local_stats(frame)?;
    let values: Vec<f64> = samples
        .iter()
        .zip(mu.values().iter().zip(sigma.values()))
        .map(|(&v, (&m, &s))| (v - m) / (s + MSCN_STABILIZER))
        .collect();
    Ok(ScalarField::new(w, h, values))
}

/// The four neighbor-product fields of an MSCN field.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseProducts {
    /// m(i,j)·m(i,j+1), size h×(w−1).
    pub horizontal: ScalarField,
    /// m(i,j)·m(i+1,j), size (h−1)×w.
    pub vertical: ScalarField,
    /// m(i,j)·m(i+1,j+1), size (h−1)×(w−1).
    pub main_diagonal: ScalarField,
    /// m(i,j)·m(i+1,j−1), size (h−1)×(w−1).
    pub secondary_diagonal: ScalarField,
}

/// Computes the horizontal, vertical, and two diagonal neighbor products.
pub fn pairwise_products(m: &MscnField) -> Result<PairwiseProducts, BrisqueError> {
    let (w, h) = (m.width(), m.height());
    if w < 2 || h < 2 {
        return Err(BrisqueError::FieldTooSmall { width: w, height: h });
    }
    let mut horizontal = Vec::with_capacity(h * (w - 1));
    let mut vertical = Vec::with_capacity((h - 1) * w);
    let mut main_diagonal = Vec::with_capacity((h - 1) * (w - 1));
    let mut secondary_diagonal = Vec::with_capacity((h - 1) * (w - 1));
    for i in 0..h {
        for j in 0..w {
            let v = m.get(i, j);
            if j + 1 < w {
                horizontal.push(v * m.get(i, j + 1));
            }
            if i + 1 < h {
                vertical.push(v * m.get(i + 1, j));
                if j + 1 < w {
                    main_diagonal.push(v * m.get(i + 1, j + 1));
                }
                if j >= 1 {
                    secondary_diagonal.push(v * m.get(i + 1, j - 1));
                }
            }
        }
    }
    Ok(PairwiseProducts {
        horizontal: ScalarField::new(w - 1, h, horizontal),
        vertical: ScalarField::new(w, h - 1, vertical),
        main_diagonal: ScalarField::new(w - 1, h - 1, main_diagonal),
        secondary_diagonal: ScalarField::new(w - 1, h - 1, secondary_diagonal),
    })
}

/// The 36-dimensional feature vector: per scale, GGD (shape, variance) of
/// the MSCN field followed by AGGD (shape, mean, left variance, right
/// variance) of the four neighbor products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrisqueFeatures {
    /// Feature values in the documented fixed order.
    pub values: [f64; FEATURE_COUNT],
}

/// Downsamples by 2×2 box averaging; odd trailing rows/columns are dropped.
fn downsample(frame: &LumaFrame) -> LumaFrame {
    let (w, h) = (frame.width() / 2, frame.height() / 2);
    LumaFrame::from_fn(w, h, frame.bit_depth(), |r, c| {
        (frame.get(2 * r, 2 * c)
            + frame.get(2 * r, 2 * c + 1)
            + frame.get(2 * r + 1, 2 * c)
            + frame.get(2 * r + 1, 2 * c + 1))
            / 4.0
    })
    .expect("halved geometry stays valid")
}

fn scale_features(frame: &LumaFrame, out: &mut [f64]) -> Result<(), BrisqueError> {
    let field = mscn(frame)?;
    let (shape, variance) = ggd_fit(field.values());
    out[0] = shape;
    out[1] = variance;
    let products = pairwise_products(&field)?;
    for (slot, field) in [
        products.horizontal,
        products.vertical,
        products.main_diagonal,
        products.secondary_diagonal,
    ]
    .iter()
    .enumerate()
    {
        let (alpha, mean, left, right) = aggd_fit(field.values());
        out[2 + 4 * slot] = alpha;
        out[3 + 4 * slot] = mean;
        out[4 + 4 * slot] = left;
        out[5 + 4 * slot] = right;
    }
    Ok(())
}

/// Extracts the full 36-dimensional feature vector (two scales).
pub fn features(frame: &LumaFrame) -> Result<BrisqueFeatures, BrisqueError> {
    let min = 2 * MIN_SIDE;
    if frame.width() < min || frame.height() < min {
        return Err(BrisqueError::FrameTooSmall {
            width: frame.width(),
            height: frame.height(),
            min,
        });
    }
    let mut values = [0.0; FEATURE_COUNT];
    scale_features(frame, &mut values[..18])?;
    scale_features(&downsample(frame), &mut values[18..])?;
    Ok(BrisqueFeatures { values })
}

/// A quality score on [0, 100]; higher means more distorted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityScore {
    /// The clamped score.
    pub value: f64,
}

impl QualityScore {
    /// Clamps `value` into [0, 100].
    pub fn new(value: f64) -> Self {
        Self { value: value.clamp(0.0, 100.0) }
    }
}

/// Mean per-frame score over the frames a sampling plan selects.
pub fn score_clip(
    clip: &dyn Clip,
    plan: &SamplingPlan,
    model: &SvrModel,
) -> Result<QualityScore, BrisqueError> {
    if plan.indices.is_empty() {
        return Err(BrisqueError::EmptyPlan);
    }
    let mut sum = 0.0;
    for &index in &plan.indices {
        let frame = clip.frame(index)?;
        sum += predict(&features(&frame)?, model)?.value;
    }
    Ok(QualityScore::new(sum / plan.indices.len() as f64))
}

impl QualityPredictor for SvrModel {
    fn score_frame(&self, frame: &LumaFrame) -> Result<f64, PredictorError> {
        let feats = features(frame).map_err(|e| PredictorError(alloc::format!("{e}")))?;
        predict(&feats, self)
            .map(|s| s.value)
            .map_err(|e| PredictorError(alloc::format!("{e}")))
    }
}
