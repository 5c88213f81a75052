//! Small dense symmetric solves for the ridge trainer and the logistic fit.

use alloc::vec::Vec;

/// Solve `a · x = b` for a row-major n×n matrix by Gaussian elimination with
/// partial pivoting. `a` and `b` are consumed as scratch. Returns `None` when
/// a pivot falls below `1e-12` times the largest initial diagonal magnitude
/// (numerically singular).
pub(crate) fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    let scale = (0..n)
        .map(|i| a[i * n + i].abs())
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let tiny = 1e-12 * scale;

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .unwrap();
        if a[pivot_row * n + col].abs() < tiny {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }

    let mut x = alloc::vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row * n + k] * x[k];
        }
        x[row] = acc / a[row * n + row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solves_small_system() {
        // [[4,1],[1,3]] x = [1,2] → x = [1/11, 7/11]
        let x = solve_dense(vec![4.0, 1.0, 1.0, 3.0], vec![1.0, 2.0]).unwrap();
        assert_relative_eq!(x[0], 1.0 / 11.0, max_relative = 1e-12);
        assert_relative_eq!(x[1], 7.0 / 11.0, max_relative = 1e-12);
    }

    #[test]
    fn rejects_singular() {
        assert!(solve_dense(vec![1.0, 2.0, 2.0, 4.0], vec![1.0, 2.0]).is_none());
    }

    #[test]
    fn matches_nalgebra_on_random_spd_systems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(2..12);
            // SPD via GᵀG + I.
            let g: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let mut s = if i == j { 1.0 } else { 0.0 };
                    for k in 0..n {
                        s += g[k * n + i] * g[k * n + j];
                    }
                    a[i * n + j] = s;
                }
            }
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let ours = solve_dense(a.clone(), b.clone()).unwrap();
            let na = nalgebra::DMatrix::from_row_slice(n, n, &a)
                .lu()
                .solve(&nalgebra::DVector::from_column_slice(&b))
                .unwrap();
            for i in 0..n {
                assert_relative_eq!(ours[i], na[i], max_relative = 1e-9, epsilon = 1e-12);
            }
        }
    }
}
