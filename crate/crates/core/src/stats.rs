//! Rank and linear correlation statistics with tie handling.

// f64 math under no_std; redundant (and flagged unused) whenever some
// dependency in the graph links std, as happens for test builds.
#[allow(unused_imports)]
use num_traits::Float as _;

use alloc::vec::Vec;

/// Errors from correlation computation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    /// Input slices differ in length.
    #[error("input lengths differ: {a} vs {b}")]
    LengthMismatch {
        /// Length of the first input.
        a: usize,
        /// Length of the second input.
        b: usize,
    },
    /// Fewer than two pairs.
    #[error("need at least 2 pairs, got {0}")]
    TooFew(usize),
    /// An input value is NaN or infinite.
    #[error("input value at index {0} is not finite")]
    NonFinite(usize),
}

/// A correlation value together with a degeneracy flag.
///
/// `degenerate` is set when a variance term in the denominator is zero
/// (constant input, or all pairs tied); the value is then defined as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    /// The coefficient in [−1, 1] (0 when degenerate).
    pub value: f64,
    /// True when the coefficient is undefined and reported as 0.
    pub degenerate: bool,
}

fn validate(a: &[f64], b: &[f64]) -> Result<(), StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(StatsError::TooFew(a.len()));
    }
    for (i, v) in a.iter().chain(b.iter()).enumerate() {
        if !v.is_finite() {
            return Err(StatsError::NonFinite(i % a.len()));
        }
    }
    Ok(())
}

/// Average ranks (1-based; ties receive the mean of the ranks they span).
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = alloc::vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end (0-based) share rank mean(start+1 ..= end).
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation with exact degenerate detection: a constant input
/// (min == max) short-circuits to the degenerate result so summation noise
/// cannot produce a spurious coefficient.
fn pearson(a: &[f64], b: &[f64]) -> Correlation {
    let constant = |v: &[f64]| {
        let (mut lo, mut hi) = (v[0], v[0]);
        for &x in v {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        lo == hi
    };
    if constant(a) || constant(b) {
        return Correlation {
            value: 0.0,
            degenerate: true,
        };
    }
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let (mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        let (da, db) = (x - mean_a, y - mean_b);
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Correlation {
            value: 0.0,
            degenerate: true,
        };
    }
    Correlation {
        value: (sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0),
        degenerate: false,
    }
}

/// Spearman rank-order correlation: Pearson on average ranks.
pub fn srocc(a: &[f64], b: &[f64]) -> Result<Correlation, StatsError> {
    validate(a, b)?;
    Ok(pearson(&average_ranks(a), &average_ranks(b)))
}

/// Kendall rank-order correlation, tau-b (tie corrected), computed in
/// O(n log n) by merge-sort inversion counting.
pub fn krocc(a: &[f64], b: &[f64]) -> Result<Correlation, StatsError> {
    validate(a, b)?;
    let n = a.len();

    let mut order: Vec<usize> = (0..n).collect();
    // +0.0 canonicalizes −0.0: the sort must group by VALUE equality, or a
    // −0.0/0.0 run would leave b unsorted inside an a-tie and the merge
    // below would miscount those pairs as discordant.
    order.sort_unstable_by(|&i, &j| {
        (a[i] + 0.0)
            .total_cmp(&(a[j] + 0.0))
            .then((b[i] + 0.0).total_cmp(&(b[j] + 0.0)))
    });

    // Tie-pair counts: within a-runs b is ascending, so the merge sort below
    // counts no inversions among a-ties and swaps == discordant pairs.
    let tied = |key: &dyn Fn(usize) -> (u64, u64)| -> u128 {
        let mut total = 0u128;
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && key(order[end]) == key(order[start]) {
                end += 1;
            }
            let t = (end - start) as u128;
            total += t * (t - 1) / 2;
            start = end;
        }
        total
    };
    // +0.0 canonicalizes −0.0 so bit-equality matches value equality.
    let canon = |x: f64| (x + 0.0).to_bits();
    let bits_a = |i: usize| (canon(a[i]), 0u64);
    let bits_ab = |i: usize| (canon(a[i]), canon(b[i]));
    let tied_a = tied(&bits_a);
    let tied_ab = tied(&bits_ab);

    let mut bv: Vec<f64> = order.iter().map(|&i| b[i]).collect();
    let swaps = merge_count(&mut bv);

    // bv is sorted now; count b-tie pairs on it.
    let mut tied_b = 0u128;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && bv[end] == bv[start] {
            end += 1;
        }
        let t = (end - start) as u128;
        tied_b += t * (t - 1) / 2;
        start = end;
    }

    let n0 = (n as u128) * (n as u128 - 1) / 2;
    let denom_a = n0 - tied_a;
    let denom_b = n0 - tied_b;
    if denom_a == 0 || denom_b == 0 {
        return Ok(Correlation {
            value: 0.0,
            degenerate: true,
        });
    }
    let num = n0 as i128 - tied_a as i128 - tied_b as i128 + tied_ab as i128
        - 2 * swaps as i128;
    let value = num as f64 / ((denom_a as f64).sqrt() * (denom_b as f64).sqrt());
    Ok(Correlation {
        value: value.clamp(-1.0, 1.0),
        degenerate: false,
    })
}

/// Merge sort counting strict inversions (pairs i < j with v[i] > v[j]).
fn merge_count(v: &mut [f64]) -> u128 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (lo, hi) = v.split_at_mut(mid);
        merge_count(lo) + merge_count(hi)
    };
    let mut merged = Vec::with_capacity(n);
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        // Equal values come from the left: ties are not inversions.
        if v[i] <= v[j] {
            merged.push(v[i]);
            i += 1;
        } else {
            inv += (mid - i) as u128;
            merged.push(v[j]);
            j += 1;
        }
    }
    merged.extend_from_slice(&v[i..mid]);
    merged.extend_from_slice(&v[j..n]);
    v.copy_from_slice(&merged);
    inv
}

/// Pearson linear correlation; with `logistic` set, `a` is first mapped
/// through a least-squares 4-parameter logistic fit a→b (see
/// [`fit_logistic4`]) and the mapped values are correlated with `b`.
pub fn plcc(a: &[f64], b: &[f64], logistic: bool) -> Result<Correlation, StatsError> {
    validate(a, b)?;
    if !logistic {
        return Ok(pearson(a, b));
    }
    let beta = fit_logistic4(a, b);
    let mapped: Vec<f64> = a.iter().map(|&x| logistic4(&beta, x)).collect();
    Ok(pearson(&mapped, b))
}

/// Evaluate the 4-parameter logistic β2 + (β1 − β2) / (1 + exp(−(x − β3)/|β4|)).
fn logistic4(beta: &[f64; 4], x: f64) -> f64 {
    let scale = beta[3].abs().max(1e-12);
    let z = (x - beta[2]) / scale;
    // exp saturates cleanly at the extremes; z is never NaN.
    let s = 1.0 / (1.0 + (-z).exp());
    beta[1] + (beta[0] - beta[1]) * s
}

/// Least-squares fit of the 4-parameter logistic by damped (Levenberg-
/// Marquardt style) Gauss-Newton iteration, at most 200 iterations.
///
/// Initialization: β1 = max(b), β2 = min(b), β3 = mean(a), β4 = std(a)/4
/// (1.0 when a is constant). Steps that do not reduce the squared error are
/// rejected and the damping factor increased.
fn fit_logistic4(a: &[f64], b: &[f64]) -> [f64; 4] {
    let n = a.len();
    let nf = n as f64;
    let mean_a = a.iter().sum::<f64>() / nf;
    let var_a = a.iter().map(|&x| (x - mean_a) * (x - mean_a)).sum::<f64>() / nf;
    let std_a = var_a.sqrt();
    let (mut lo, mut hi) = (b[0], b[0]);
    for &y in b {
        lo = lo.min(y);
        hi = hi.max(y);
    }
    let mut beta = [hi, lo, mean_a, if std_a > 0.0 { std_a / 4.0 } else { 1.0 }];

    let sse = |beta: &[f64; 4]| -> f64 {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| {
                let r = y - logistic4(beta, x);
                r * r
            })
            .sum()
    };
    let mut best = sse(&beta);
    let mut damping = 1e-3;

    for _ in 0..200 {
        // Normal equations JᵀJ δ = Jᵀr with LM diagonal damping.
        let mut jtj = [0.0f64; 16];
        let mut jtr = [0.0f64; 4];
        let scale = beta[3].abs().max(1e-12);
        for (&x, &y) in a.iter().zip(b) {
            let z = (x - beta[2]) / scale;
            let s = 1.0 / (1.0 + (-z).exp());
            let ds = s * (1.0 - s);
            let amp = beta[0] - beta[1];
            let j = [
                s,
                1.0 - s,
                -amp * ds / scale,
                -amp * ds * (x - beta[2]) / (scale * scale) * beta[3].signum(),
            ];
            let r = y - logistic4(&beta, x);
            for p in 0..4 {
                jtr[p] += j[p] * r;
                for q in 0..4 {
                    jtj[p * 4 + q] += j[p] * j[q];
                }
            }
        }
        for p in 0..4 {
            jtj[p * 4 + p] += damping * jtj[p * 4 + p].max(1e-12);
        }
        let Some(delta) = crate::linalg::solve_dense(jtj.to_vec(), jtr.to_vec()) else {
            damping *= 10.0;
            continue;
        };
        let candidate = [
            beta[0] + delta[0],
            beta[1] + delta[1],
            beta[2] + delta[2],
            beta[3] + delta[3],
        ];
        let cand_sse = sse(&candidate);
        if cand_sse.is_finite() && cand_sse < best {
            let gain = best - cand_sse;
            beta = candidate;
            best = cand_sse;
            damping = (damping / 3.0).max(1e-12);
            if gain <= 1e-12 * (best + 1e-30) {
                break;
            }
        } else {
            damping *= 3.0;
            if damping > 1e12 {
                break;
            }
        }
    }
    beta
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn brute_srocc(a: &[f64], b: &[f64]) -> f64 {
        // Ranks by definition: count-below + half the equal block, Pearson by
        // the textbook formula.
        let rank = |v: &[f64]| -> Vec<f64> {
            v.iter()
                .map(|&x| {
                    let below = v.iter().filter(|&&y| y < x).count() as f64;
                    let equal = v.iter().filter(|&&y| y == x).count() as f64;
                    below + (equal + 1.0) / 2.0
                })
                .collect()
        };
        textbook_pearson(&rank(a), &rank(b))
    }

    fn textbook_pearson(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let ma = a.iter().sum::<f64>() / n;
        let mb = b.iter().sum::<f64>() / n;
        let cov: f64 = a.iter().zip(b).map(|(&x, &y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|&x| (x - ma) * (x - ma)).sum();
        let vb: f64 = b.iter().map(|&y| (y - mb) * (y - mb)).sum();
        cov / (va.sqrt() * vb.sqrt())
    }

    fn brute_krocc(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len();
        let (mut conc, mut disc, mut tie_a, mut tie_b) = (0i64, 0i64, 0i64, 0i64);
        for i in 0..n {
            for j in i + 1..n {
                let da = a[i] - a[j];
                let db = b[i] - b[j];
                if da == 0.0 && db == 0.0 {
                    tie_a += 1;
                    tie_b += 1;
                } else if da == 0.0 {
                    tie_a += 1;
                } else if db == 0.0 {
                    tie_b += 1;
                } else if da * db > 0.0 {
                    conc += 1;
                } else {
                    disc += 1;
                }
            }
        }
        let n0 = (n * (n - 1) / 2) as f64;
        ((conc - disc) as f64) / ((n0 - tie_a as f64).sqrt() * (n0 - tie_b as f64).sqrt())
    }

    #[test]
    fn srocc_known_values() {
        let r = srocc(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert_relative_eq!(r.value, 0.8, max_relative = 1e-15);
        assert!(!r.degenerate);
        let identical = srocc(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_relative_eq!(identical.value, 1.0, epsilon = 1e-15);
        let reversed = srocc(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap();
        assert_relative_eq!(reversed.value, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn srocc_spearman_closed_form_on_distinct_values() {
        // 1 − 6Σd²/(n(n²−1)) holds when there are no ties.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(3..50);
            let a: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let ra = average_ranks(&a);
            let rb = average_ranks(&b);
            let d2: f64 = ra.iter().zip(&rb).map(|(&x, &y)| (x - y) * (x - y)).sum();
            let nf = n as f64;
            let closed = 1.0 - 6.0 * d2 / (nf * (nf * nf - 1.0));
            assert_relative_eq!(srocc(&a, &b).unwrap().value, closed, epsilon = 1e-12);
        }
    }

    #[test]
    fn krocc_known_values() {
        let r = krocc(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap();
        assert_relative_eq!(r.value, 1.0 / 3.0, max_relative = 1e-15);
        assert_eq!(krocc(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap().value, 1.0);
    }

    #[test]
    fn krocc_groups_negative_zero_with_zero() {
        // (0,1) is an a-tie (−0.0 == 0.0); the other two pairs are
        // concordant, so τ = 2/√((3−1)·3). A sort order that separates the
        // two zeros leaves b unsorted inside the tie and miscounts.
        let a = [0.0, -0.0, 1.0];
        let b = [1.0, 2.0, 3.0];
        let r = krocc(&a, &b).unwrap();
        assert_relative_eq!(r.value, 2.0 / 6.0f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn rank_correlations_match_brute_force_with_ties() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let n = rng.gen_range(2..120);
            // Coarse quantization forces many ties.
            let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0..6) as f64).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0..6) as f64).collect();
            let fast = krocc(&a, &b).unwrap();
            let slow = brute_krocc(&a, &b);
            if slow.is_nan() {
                assert!(fast.degenerate);
            } else {
                assert_relative_eq!(fast.value, slow, epsilon = 1e-12);
            }
            let s_fast = srocc(&a, &b).unwrap();
            let s_slow = brute_srocc(&a, &b);
            if s_slow.is_nan() {
                assert!(s_fast.degenerate);
            } else {
                assert_relative_eq!(s_fast.value, s_slow, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_inputs_flagged() {
        for f in [srocc, krocc] {
            let r = f(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).unwrap();
            assert_eq!((r.value, r.degenerate), (0.0, true));
        }
        let r = plcc(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0], false).unwrap();
        assert_eq!((r.value, r.degenerate), (0.0, true));
    }

    #[test]
    fn errors_on_bad_input() {
        assert!(matches!(
            srocc(&[1.0], &[1.0, 2.0]),
            Err(StatsError::LengthMismatch { a: 1, b: 2 })
        ));
        assert!(matches!(srocc(&[1.0], &[1.0]), Err(StatsError::TooFew(1))));
        assert!(matches!(
            plcc(&[1.0, f64::NAN], &[1.0, 2.0], false),
            Err(StatsError::NonFinite(_))
        ));
    }

    #[test]
    fn plcc_affine_invariance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let a: Vec<f64> = (0..40).map(|_| rng.gen::<f64>()).collect();
        let b: Vec<f64> = (0..40).map(|_| rng.gen::<f64>()).collect();
        let base = plcc(&a, &b, false).unwrap().value;
        let scaled: Vec<f64> = b.iter().map(|&y| 3.5 * y - 2.0).collect();
        assert_relative_eq!(plcc(&a, &scaled, false).unwrap().value, base, epsilon = 1e-12);
        let negated: Vec<f64> = b.iter().map(|&y| -2.0 * y + 1.0).collect();
        assert_relative_eq!(plcc(&a, &negated, false).unwrap().value, -base, epsilon = 1e-12);
        let two_a_plus_1: Vec<f64> = a.iter().map(|&x| 2.0 * x + 1.0).collect();
        assert_relative_eq!(
            plcc(&a, &two_a_plus_1, false).unwrap().value,
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn srocc_invariant_under_strictly_increasing_transforms() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let n = rng.gen_range(3..80);
            let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let base = srocc(&a, &b).unwrap().value;
            let fa: Vec<f64> = a.iter().map(|&x| x.exp()).collect();
            let gb: Vec<f64> = b.iter().map(|&y| y * y * y + y).collect();
            assert_eq!(srocc(&fa, &gb).unwrap().value, base);
        }
    }

    #[test]
    fn logistic_plcc_recovers_sigmoid_relation() {
        // b is a noiseless logistic of a: the mapped correlation should be ~1
        // while the raw one is visibly lower.
        let a: Vec<f64> = (0..60).map(|i| i as f64 / 6.0 - 5.0).collect();
        let b: Vec<f64> = a.iter().map(|&x| 2.0 + 3.0 / (1.0 + (-2.0 * x).exp())).collect();
        let raw = plcc(&a, &b, false).unwrap().value;
        let mapped = plcc(&a, &b, true).unwrap().value;
        assert!(mapped > 0.9999, "mapped = {mapped}");
        assert!(mapped >= raw);
    }

    #[test]
    fn plcc_matches_textbook_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let n = rng.gen_range(2..200);
            let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let ours = plcc(&a, &b, false).unwrap();
            let oracle = textbook_pearson(&a, &b);
            if oracle.is_nan() {
                assert!(ours.degenerate);
            } else {
                assert_relative_eq!(ours.value, oracle, epsilon = 1e-12);
            }
        }
    }
}
