//! Non-uniform temporal frame selection and proportional budget allocation.
//!
//! Sampling density over normalized clip time t ∈ [0,1] is linear,
//! w(t) = 5 + (3x − 2)·t, so the front/back weight ratio w(0)/w(1) runs from
//! 5/3 (front-heavy, x = 0) through uniform (x = 2/3) to 5/6 (back-heavy,
//! x = 1). Frames are drawn by inverse-CDF sampling at quantile midpoints.

// f64 math under no_std; redundant (and flagged unused) whenever some
// dependency in the graph links std, as happens for test builds.
#[allow(unused_imports)]
use num_traits::Float as _;

use alloc::vec::Vec;

/// Errors from budget allocation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemporalError {
    /// No segment weights supplied.
    #[error("weights must be non-empty")]
    EmptyWeights,
    /// A segment weight is zero, negative, or not finite.
    #[error("weight at index {index} must be a positive finite number")]
    NonPositiveWeight {
        /// Index of the offending weight.
        index: usize,
    },
}

/// The linear sampling density w(t) = 5 + (3x − 2)·t for t ∈ [0,1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalDensity {
    x: f64,
}

impl TemporalDensity {
    /// Creates the density for confidence `x`, clamped into [0, 1].
    pub fn new(x: f64) -> Self {
        Self { x: x.clamp(0.0, 1.0) }
    }

    /// The confidence actually used (after clamping).
    pub fn x(&self) -> f64 {
        self.x
    }

    /// Density value w(t) = 5 + (3x − 2)·t; strictly positive on [0,1].
    pub fn weight(&self, t: f64) -> f64 {
        5.0 + (3.0 * self.x - 2.0) * t
    }

    /// Unnormalized integral W(t) = 5t + (3x − 2)·t²/2.
    pub fn integral(&self, t: f64) -> f64 {
        5.0 * t + (3.0 * self.x - 2.0) * t * t / 2.0
    }

    /// Total mass W(1) = (8 + 3x)/2.
    pub fn total(&self) -> f64 {
        (8.0 + 3.0 * self.x) / 2.0
    }
}

/// Inverse of the normalized density CDF: returns t ∈ [0,1] with
/// W(t)/W(1) = u.
///
/// Uses the Citardauq form of the quadratic root,
/// t = 2·u·W(1) / (5 + √(25 + 2(3x−2)·u·W(1))), which stays stable as the
/// quadratic coefficient vanishes at x = 2/3 (uniform density). Both `u` and
/// `x` are clamped into [0, 1]; the result is clamped as well.
pub fn density_cdf_inverse(u: f64, x: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    let density = TemporalDensity::new(x);
    let a = 3.0 * density.x - 2.0;
    let mass = u * density.total();
    let t = 2.0 * mass / (5.0 + (25.0 + 2.0 * a * mass).sqrt());
    t.clamp(0.0, 1.0)
}

/// A deterministic frame-selection plan.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SamplingPlan {
    /// Confidence driving the density (after clamping).
    #[cfg_attr(feature = "serde", serde(rename = "x"))]
    pub x_used: f64,
    /// Requested frame budget (indices may be fewer on short clips).
    pub budget: usize,
    /// Selected frame indices, strictly increasing.
    pub indices: Vec<usize>,
}

/// Selects `budget` frame indices from a clip of `frame_count` frames by
/// inverse-CDF sampling at the quantile midpoints (k − 0.5)/budget.
///
/// Duplicate rounded indices shift to the nearest unused index (preferring
/// larger); the result is strictly increasing. When `budget ≥ frame_count`
/// every frame is selected.
///
/// # Panics
/// Panics when `frame_count` or `budget` is zero.
pub fn sample_frames(frame_count: usize, budget: usize, x: f64) -> SamplingPlan {
    sample_frames_oriented(frame_count, budget, x, false)
}

/// [`sample_frames`] with an orientation switch: with `reverse_density` set
/// the density is mirrored in time (t ↦ 1 − t), making the plan back-heavy
/// where the forward plan is front-heavy.
///
/// # Panics
/// Panics when `frame_count` or `budget` is zero.
pub fn sample_frames_oriented(
    frame_count: usize,
    budget: usize,
    x: f64,
    reverse_density: bool,
) -> SamplingPlan {
    assert!(frame_count >= 1, "frame_count must be at least 1");
    assert!(budget >= 1, "budget must be at least 1");
    let x_used = x.clamp(0.0, 1.0);
    if budget >= frame_count {
        return SamplingPlan {
            x_used,
            budget,
            indices: (0..frame_count).collect(),
        };
    }

    let span = (frame_count - 1) as f64;
    let mut used = alloc::vec![false; frame_count];
    let mut indices = Vec::with_capacity(budget);
    for k in 1..=budget {
        let u = (k as f64 - 0.5) / budget as f64;
        let t = if reverse_density {
            1.0 - density_cdf_inverse(1.0 - u, x_used)
        } else {
            density_cdf_inverse(u, x_used)
        };
        let mut idx = (t * span).round() as usize;
        if used[idx] {
            let mut d = 1;
            loop {
                if idx + d < frame_count && !used[idx + d] {
                    idx += d;
                    break;
                }
                if idx >= d && !used[idx - d] {
                    idx -= d;
                    break;
                }
                d += 1;
            }
        }
        used[idx] = true;
        indices.push(idx);
    }
    // The shift step can locally reorder indices near crowded regions.
    indices.sort_unstable();
    SamplingPlan { x_used, budget, indices }
}

/// Splits an integer frame budget across segments in proportion to their
/// weights, returning the exact maximizer of Σ wᵢ·ln(countᵢ) subject to
/// Σ countᵢ = budget.
///
/// The continuous optimum is exactly proportional allocation; over integers,
/// greedy assignment by marginal gain wᵢ·ln((c+1)/c) is optimal because the
/// objective is separable and concave. Ties go to the lower index. Every
/// count is positive once budget ≥ weights.len(); naive largest-remainder
/// rounding lacks both guarantees (e.g. weights [4.9, 3.5], budget 6 rounds
/// to [4, 2] while [3, 3] scores higher). Runs in O(budget · segments).
pub fn allocate_frames(weights: &[f64], budget: usize) -> Result<Vec<usize>, TemporalError> {
    if weights.is_empty() {
        return Err(TemporalError::EmptyWeights);
    }
    for (index, &w) in weights.iter().enumerate() {
        if !(w.is_finite() && w > 0.0) {
            return Err(TemporalError::NonPositiveWeight { index });
        }
    }
    let mut counts = alloc::vec![0usize; weights.len()];
    // Gain of raising countᵢ by one; infinite while countᵢ = 0, so the first
    // weights.len() units spread one frame to every segment.
    let mut gains = alloc::vec![f64::INFINITY; weights.len()];
    for _ in 0..budget {
        let mut best = 0;
        for i in 1..gains.len() {
            if gains[i] > gains[best] {
                best = i;
            }
        }
        counts[best] += 1;
        let c = counts[best] as f64;
        gains[best] = weights[best] * ((c + 1.0) / c).ln();
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    /// Numerically inverts the CDF by bisection on a trapezoid-integrated
    /// dense grid; independent of the closed form under test.
    fn numeric_inverse(u: f64, x: f64, grid: usize) -> f64 {
        let d = TemporalDensity::new(x);
        let mut cdf = vec![0.0; grid + 1];
        for i in 1..=grid {
            let t0 = (i - 1) as f64 / grid as f64;
            let t1 = i as f64 / grid as f64;
            cdf[i] = cdf[i - 1] + (d.weight(t0) + d.weight(t1)) / 2.0 * (t1 - t0);
        }
        let target = u * cdf[grid];
        let pos = cdf.partition_point(|&c| c < target);
        if pos == 0 {
            return 0.0;
        }
        // Linear interpolation inside the bracketing cell.
        let (c0, c1) = (cdf[pos - 1], cdf[pos]);
        let frac = if c1 > c0 { (target - c0) / (c1 - c0) } else { 0.0 };
        ((pos - 1) as f64 + frac) / grid as f64
    }

    #[test]
    fn inverse_cdf_endpoints_and_uniform_case() {
        for x in [0.0, 0.3, 2.0 / 3.0, 1.0] {
            assert_eq!(density_cdf_inverse(0.0, x), 0.0);
            assert_relative_eq!(density_cdf_inverse(1.0, x), 1.0, epsilon = 1e-15);
        }
        for i in 0..=20 {
            let u = i as f64 / 20.0;
            assert_relative_eq!(density_cdf_inverse(u, 2.0 / 3.0), u, epsilon = 1e-15);
        }
    }

    #[test]
    fn inverse_cdf_closed_form_matches_quadratic_root() {
        // x=0, u=0.5: 5t − t² = 2 ⇒ t = (5 − √17)/2.
        let expected = (5.0 - 17.0f64.sqrt()) / 2.0;
        assert_relative_eq!(density_cdf_inverse(0.5, 0.0), expected, epsilon = 1e-15);
        assert_relative_eq!(expected, 0.43845, epsilon = 5e-6);
    }

    #[test]
    fn inverse_cdf_matches_dense_grid_integration() {
        for &x in &[0.0, 0.1, 0.25, 2.0 / 3.0, 0.9, 1.0] {
            for i in 0..=10 {
                let u = i as f64 / 10.0;
                let numeric = numeric_inverse(u, x, 1_000_000);
                assert_relative_eq!(
                    density_cdf_inverse(u, x),
                    numeric,
                    epsilon = 1e-9,
                    max_relative = 1e-9
                );
            }
        }
    }

    #[test]
    fn inverse_cdf_round_trips_through_cdf() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let x = rng.gen::<f64>();
            let u = rng.gen::<f64>();
            let t = density_cdf_inverse(u, x);
            let d = TemporalDensity::new(x);
            assert_relative_eq!(d.integral(t) / d.total(), u, epsilon = 1e-12);
        }
    }

    #[test]
    fn inverse_cdf_clamps_out_of_domain_arguments() {
        assert_eq!(density_cdf_inverse(-0.5, 0.3), 0.0);
        assert_relative_eq!(density_cdf_inverse(1.5, 0.3), 1.0, epsilon = 1e-15);
        assert_eq!(density_cdf_inverse(0.4, -2.0), density_cdf_inverse(0.4, 0.0));
        assert_eq!(density_cdf_inverse(0.4, 9.0), density_cdf_inverse(0.4, 1.0));
    }

    #[test]
    fn full_budget_returns_identity_plan() {
        for (n, budget) in [(10, 10), (10, 11), (1, 1), (3, 50)] {
            let plan = sample_frames(n, budget, 0.2);
            assert_eq!(plan.indices, (0..n).collect::<Vec<_>>());
            assert_eq!(plan.budget, budget);
        }
    }

    #[test]
    fn uniform_density_hits_midpoints() {
        let plan = sample_frames(100, 10, 2.0 / 3.0);
        for (i, &idx) in plan.indices.iter().enumerate() {
            let expected = 5 + 10 * i;
            assert!(
                (idx as i64 - expected as i64).abs() <= 1,
                "index {idx} vs midpoint {expected}"
            );
        }
    }

    #[test]
    fn plans_match_numeric_inversion_oracle() {
        // Rebuild the plan from the independent numeric inverse and compare.
        for &(n, budget, x) in &[(150usize, 10usize, 0.1f64), (240, 16, 0.0), (97, 12, 0.85)] {
            let plan = sample_frames(n, budget, x);
            let mut used = vec![false; n];
            let mut expected = Vec::new();
            for k in 1..=budget {
                let u = (k as f64 - 0.5) / budget as f64;
                let t = numeric_inverse(u, x, 400_000);
                let mut idx = (t * (n - 1) as f64).round() as usize;
                if used[idx] {
                    let mut d = 1;
                    loop {
                        if idx + d < n && !used[idx + d] {
                            idx += d;
                            break;
                        }
                        if idx >= d && !used[idx - d] {
                            idx -= d;
                            break;
                        }
                        d += 1;
                    }
                }
                used[idx] = true;
                expected.push(idx);
            }
            expected.sort_unstable();
            assert_eq!(plan.indices, expected, "n={n} budget={budget} x={x}");
        }
    }

    #[test]
    fn front_heavy_at_low_x() {
        let plan = sample_frames(150, 10, 0.1);
        let front = plan.indices.iter().filter(|&&i| i < 75).count();
        let back = plan.indices.len() - front;
        assert!(front > back, "front {front} back {back}");
    }

    #[test]
    fn indices_strictly_increasing_and_in_range() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let n = rng.gen_range(1..400);
            let budget = rng.gen_range(1..50);
            let x = rng.gen::<f64>();
            let plan = sample_frames(n, budget, x);
            assert_eq!(plan.indices.len(), budget.min(n));
            assert!(plan.indices.windows(2).all(|w| w[0] < w[1]));
            assert!(plan.indices.iter().all(|&i| i < n));
        }
    }

    #[test]
    fn reversed_orientation_mirrors_forward_plan() {
        let n = 151;
        let fwd = sample_frames_oriented(n, 10, 0.0, false);
        let rev = sample_frames_oriented(n, 10, 0.0, true);
        let mirrored: Vec<usize> = fwd.indices.iter().rev().map(|&i| n - 1 - i).collect();
        for (&r, &m) in rev.indices.iter().zip(&mirrored) {
            assert!((r as i64 - m as i64).abs() <= 1, "reversed {r} vs mirrored {m}");
        }
    }

    #[test]
    fn allocator_known_splits() {
        assert_eq!(allocate_frames(&[1.0, 1.0], 10).unwrap(), [5, 5]);
        assert_eq!(allocate_frames(&[5.0, 3.0], 8).unwrap(), [5, 3]);
        assert_eq!(allocate_frames(&[5.0, 6.0], 11).unwrap(), [5, 6]);
        assert_eq!(allocate_frames(&[1.0, 1.0, 1.0], 1).unwrap(), [1, 0, 0]);
        assert_eq!(allocate_frames(&[1.0, 1.0, 1.0, 1.0], 2).unwrap(), [1, 1, 0, 0]);
        assert_eq!(allocate_frames(&[2.0, 1.0], 0).unwrap(), [0, 0]);
        // Proportional rounding would give [4, 2]; the log objective prefers
        // the flatter split (4.9·ln3 + 3.5·ln3 > 4.9·ln4 + 3.5·ln2).
        assert_eq!(allocate_frames(&[4.9, 3.5], 6).unwrap(), [3, 3]);
        // Skewed weights still leave no segment empty once budget ≥ segments.
        assert_eq!(allocate_frames(&[100.0, 1.0, 1.0], 3).unwrap(), [1, 1, 1]);
    }

    #[test]
    fn allocator_rejects_bad_weights() {
        assert_eq!(allocate_frames(&[], 5), Err(TemporalError::EmptyWeights));
        assert_eq!(
            allocate_frames(&[1.0, 0.0], 5),
            Err(TemporalError::NonPositiveWeight { index: 1 })
        );
        assert_eq!(
            allocate_frames(&[1.0, -2.0], 5),
            Err(TemporalError::NonPositiveWeight { index: 1 })
        );
        assert_eq!(
            allocate_frames(&[f64::NAN], 5),
            Err(TemporalError::NonPositiveWeight { index: 0 })
        );
    }

    /// Objective value Σ wᵢ·ln(cᵢ); −∞ as soon as any count is zero.
    fn log_value(weights: &[f64], counts: &[usize]) -> f64 {
        weights
            .iter()
            .zip(counts)
            .map(|(w, &c)| if c == 0 { f64::NEG_INFINITY } else { w * (c as f64).ln() })
            .sum()
    }

    /// Best objective over every composition of `budget` into `n` counts.
    fn exhaustive_best(weights: &[f64], budget: usize) -> f64 {
        fn recurse(weights: &[f64], left: usize, counts: &mut Vec<usize>, best: &mut f64) {
            if counts.len() == weights.len() - 1 {
                counts.push(left);
                let v = log_value(weights, counts);
                if v > *best {
                    *best = v;
                }
                counts.pop();
                return;
            }
            for c in 0..=left {
                counts.push(c);
                recurse(weights, left - c, counts, best);
                counts.pop();
            }
        }
        let mut best = f64::NEG_INFINITY;
        recurse(weights, budget, &mut Vec::new(), &mut best);
        best
    }

    #[test]
    fn allocator_preserves_budget_and_matches_exhaustive_optimum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.gen_range(1..5);
            let budget = rng.gen_range(0..13);
            let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..10.0)).collect();
            let counts = allocate_frames(&weights, budget).unwrap();
            assert_eq!(counts.iter().sum::<usize>(), budget);
            let got = log_value(&weights, &counts);
            let best = exhaustive_best(&weights, budget);
            assert!(
                got == best || (got - best).abs() <= 1e-9 * best.abs().max(1.0),
                "{weights:?} budget {budget}: {counts:?} scores {got}, best {best}"
            );
        }
    }
}
