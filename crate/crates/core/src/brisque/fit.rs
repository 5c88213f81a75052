//! Moment-matching estimators for generalized Gaussian (GGD) and
//! asymmetric generalized Gaussian (AGGD) sample distributions.
//!
//! Both estimators match the ratio r(γ) = Γ(2/γ)²/(Γ(1/γ)·Γ(3/γ)) against a
//! precomputed grid over γ ∈ [0.2, 10] in steps of 0.001 (9801 points).

// f64 math under no_std; redundant (and flagged unused) whenever some
// dependency in the graph links std, as happens for test builds.
#[allow(unused_imports)]
use num_traits::Float as _;

use alloc::boxed::Box;
use alloc::vec::Vec;
use once_cell::race::OnceBox;

const GRID_START: f64 = 0.2;
const GRID_STEP: f64 = 0.001;
const GRID_LEN: usize = 9801;

/// Shape reported when samples carry no energy (grid maximum).
const FALLBACK_SHAPE: f64 = 10.0;

fn gamma_at(index: usize) -> f64 {
    GRID_START + GRID_STEP * index as f64
}

/// ln Γ via libm; all arguments here are positive so the sign term is 1.
fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// r(γ) = Γ(2/γ)² / (Γ(1/γ)·Γ(3/γ)), strictly increasing in γ.
fn moment_ratio(gamma: f64) -> f64 {
    (2.0 * ln_gamma(2.0 / gamma) - ln_gamma(1.0 / gamma) - ln_gamma(3.0 / gamma)).exp()
}

fn ratio_grid() -> &'static [f64] {
    static GRID: OnceBox<Vec<f64>> = OnceBox::new();
    GRID.get_or_init(|| {
        Box::new((0..GRID_LEN).map(|k| moment_ratio(gamma_at(k))).collect())
    })
}

/// Grid point whose r(γ) lies closest to `target` (first index on ties).
fn closest_shape(target: f64) -> f64 {
    let grid = ratio_grid();
    let mut best = 0;
    let mut best_err = f64::INFINITY;
    for (k, &r) in grid.iter().enumerate() {
        let err = (r - target).abs();
        if err < best_err {
            best_err = err;
            best = k;
        }
    }
    gamma_at(best)
}

/// Fits a zero-mean GGD by moment matching: ρ = (E|X|)²/E[X²] located on
/// the r(γ) grid. Returns (shape, variance) with variance = E[X²].
///
/// Samples without energy (empty or all zero) fall back to the grid-maximum
/// shape with zero variance.
pub fn ggd_fit(samples: &[f64]) -> (f64, f64) {
    if samples.is_empty() {
        return (FALLBACK_SHAPE, 0.0);
    }
    let n = samples.len() as f64;
    let mean_abs = samples.iter().map(|&x| x.abs()).sum::<f64>() / n;
    let mean_sq = samples.iter().map(|&x| x * x).sum::<f64>() / n;
    if mean_sq == 0.0 {
        return (FALLBACK_SHAPE, 0.0);
    }
    let rho = mean_abs * mean_abs / mean_sq;
    (closest_shape(rho), mean_sq)
}

/// Fits an AGGD around zero. Returns (shape, mean, left_variance,
/// right_variance) where the variances are the one-sided second moments
/// (negative and positive samples respectively; zeros count to neither),
/// and mean η = (σ_r − σ_l)·Γ(2/α)/Γ(1/α)·√(Γ(1/α)/Γ(3/α)).
///
/// An empty side contributes zero variance; the side-ratio correction then
/// degenerates to the plain moment ratio. All-zero samples fall back to the
/// grid-maximum shape with all moments zero.
pub fn aggd_fit(samples: &[f64]) -> (f64, f64, f64, f64) {
    let (mut left_sum, mut left_n) = (0.0, 0usize);
    let (mut right_sum, mut right_n) = (0.0, 0usize);
    let (mut abs_sum, mut sq_sum) = (0.0, 0.0);
    for &x in samples {
        abs_sum += x.abs();
        sq_sum += x * x;
        if x < 0.0 {
            left_sum += x * x;
            left_n += 1;
        } else if x > 0.0 {
            right_sum += x * x;
            right_n += 1;
        }
    }
    if samples.is_empty() || sq_sum == 0.0 {
        return (FALLBACK_SHAPE, 0.0, 0.0, 0.0);
    }
    let n = samples.len() as f64;
    let left_var = if left_n == 0 { 0.0 } else { left_sum / left_n as f64 };
    let right_var = if right_n == 0 { 0.0 } else { right_sum / right_n as f64 };
    let left_std = left_var.sqrt();
    let right_std = right_var.sqrt();

    let rhat = (abs_sum / n) * (abs_sum / n) / (sq_sum / n);
    let rhatnorm = if right_std == 0.0 {
        // γ̂ → ∞ limit of the correction factor is 1.
        rhat
    } else {
        let gammahat = left_std / right_std;
        rhat * (gammahat * gammahat * gammahat + 1.0) * (gammahat + 1.0)
            / ((gammahat * gammahat + 1.0) * (gammahat * gammahat + 1.0))
    };
    let alpha = closest_shape(rhatnorm);
    let mean = (right_std - left_std)
        * (ln_gamma(2.0 / alpha) - ln_gamma(1.0 / alpha)).exp()
        * ((ln_gamma(1.0 / alpha) - ln_gamma(3.0 / alpha)) / 2.0).exp();
    (alpha, mean, left_var, right_var)
}
