//! Support-vector-regression score prediction over the 36-dimensional
//! feature vector, with min-max feature scaling baked into the model.

// f64 math under no_std; redundant (and flagged unused) whenever some
// dependency in the graph links std, as happens for test builds.
#[allow(unused_imports)]
use num_traits::Float as _;

use alloc::vec::Vec;

use super::{BrisqueError, BrisqueFeatures, QualityScore, FEATURE_COUNT};

/// Kernel-specific model parameters. Serialized inline with the model under
/// a `kernel` tag of `"rbf"` or `"linear"`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kernel", rename_all = "lowercase"))]
pub enum SvrKernel {
    /// Radial-basis-function kernel: Σⱼ dualⱼ·exp(−γ‖f − svⱼ‖²) − rho.
    Rbf {
        /// Kernel width γ.
        gamma: f64,
        /// Bias subtracted from the kernel sum.
        rho: f64,
        /// Support vectors in scaled feature space, n_sv × 36.
        support_vectors: Vec<Vec<f64>>,
        /// Dual coefficients, one per support vector.
        dual_coefs: Vec<f64>,
    },
    /// Linear model: weights·f + bias in scaled feature space.
    Linear {
        /// One weight per feature.
        weights: Vec<f64>,
        /// Additive bias.
        bias: f64,
    },
}

/// A trained score predictor: feature scaling bounds plus kernel weights.
/// Immutable after load; shareable across threads.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SvrModel {
    /// Kernel parameters (tagged inline).
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub kernel: SvrKernel,
    /// Per-feature minimum of the training data.
    pub feature_min: Vec<f64>,
    /// Per-feature maximum of the training data; strictly above the minimum.
    pub feature_max: Vec<f64>,
}

impl SvrModel {
    /// Checks all structural invariants.
    pub fn validate(&self) -> Result<(), BrisqueError> {
        let bounds_ok = self.feature_min.len() == FEATURE_COUNT
            && self.feature_max.len() == FEATURE_COUNT;
        if !bounds_ok {
            return Err(BrisqueError::InvalidModel(
                "feature_min and feature_max must each hold 36 values",
            ));
        }
        for (&lo, &hi) in self.feature_min.iter().zip(&self.feature_max) {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(BrisqueError::InvalidModel(
                    "feature_max must exceed feature_min in every dimension",
                ));
            }
        }
        match &self.kernel {
            SvrKernel::Rbf { gamma, rho, support_vectors, dual_coefs } => {
                if support_vectors.is_empty() {
                    return Err(BrisqueError::InvalidModel(
                        "rbf model needs at least one support vector",
                    ));
                }
                if dual_coefs.len() != support_vectors.len() {
                    return Err(BrisqueError::InvalidModel(
                        "dual_coefs length must match support_vectors",
                    ));
                }
                if support_vectors.iter().any(|sv| sv.len() != FEATURE_COUNT) {
                    return Err(BrisqueError::InvalidModel(
                        "every support vector must hold 36 values",
                    ));
                }
                let finite = gamma.is_finite()
                    && rho.is_finite()
                    && dual_coefs.iter().all(|c| c.is_finite())
                    && support_vectors.iter().flatten().all(|v| v.is_finite());
                if !finite {
                    return Err(BrisqueError::InvalidModel(
                        "rbf parameters must be finite",
                    ));
                }
            }
            SvrKernel::Linear { weights, bias } => {
                if weights.len() != FEATURE_COUNT {
                    return Err(BrisqueError::InvalidModel("weights must hold 36 values"));
                }
                if !(bias.is_finite() && weights.iter().all(|w| w.is_finite())) {
                    return Err(BrisqueError::InvalidModel(
                        "linear parameters must be finite",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Min-max scaling into [−1, 1] on the training bounds (values outside
    /// the bounds extrapolate; no clamping).
    fn scale(&self, features: &BrisqueFeatures) -> [f64; FEATURE_COUNT] {
        let mut scaled = [0.0; FEATURE_COUNT];
        for (i, out) in scaled.iter_mut().enumerate() {
            let (lo, hi) = (self.feature_min[i], self.feature_max[i]);
            *out = -1.0 + 2.0 * (features.values[i] - lo) / (hi - lo);
        }
        scaled
    }
}

/// Predicts the quality score for a feature vector, clamped to [0, 100].
pub fn predict(features: &BrisqueFeatures, model: &SvrModel) -> Result<QualityScore, BrisqueError> {
    model.validate()?;
    let scaled = model.scale(features);
    let raw = match &model.kernel {
        SvrKernel::Rbf { gamma, rho, support_vectors, dual_coefs } => {
            let mut sum = 0.0;
            for (sv, &coef) in support_vectors.iter().zip(dual_coefs) {
                let mut dist = 0.0;
                for (&a, &b) in scaled.iter().zip(sv) {
                    let d = a - b;
                    dist += d * d;
                }
                sum += coef * (-gamma * dist).exp();
            }
            sum - rho
        }
        SvrKernel::Linear { weights, bias } => {
            scaled.iter().zip(weights).map(|(&f, &w)| f * w).sum::<f64>() + bias
        }
    };
    Ok(QualityScore::new(raw))
}
