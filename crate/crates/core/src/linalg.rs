//! Small dense linear solver shared by the Ritz oracle and calibration.

use alloc::vec;
use alloc::vec::Vec;

/// Solve `A x = b` for a small dense `n x n` system by Gaussian elimination
/// with partial pivoting. `a` is row-major. Returns `None` when the matrix
/// is numerically singular (pivot below `tol` relative to the largest
/// initial pivot column entry).
pub(crate) fn solve(a: &[f64], b: &[f64], n: usize, tol: f64) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    let scale = m
        .iter()
        .fold(0.0f64, |acc, &v| if crate::fp::abs(v) > acc { crate::fp::abs(v) } else { acc });
    if scale == 0.0 {
        return None;
    }

    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        // pivot
        let mut best = col;
        let mut best_val = crate::fp::abs(m[perm[col] * n + col]);
        for row in col + 1..n {
            let v = crate::fp::abs(m[perm[row] * n + col]);
            if v > best_val {
                best = row;
                best_val = v;
            }
        }
        if best_val <= tol * scale {
            return None;
        }
        perm.swap(col, best);
        let p = perm[col];
        for row in col + 1..n {
            let r = perm[row];
            let f = m[r * n + col] / m[p * n + col];
            if f != 0.0 {
                for k in col..n {
                    m[r * n + k] -= f * m[p * n + k];
                }
                x[r] -= f * x[p];
            }
        }
    }

    let mut out = vec![0.0; n];
    for col in (0..n).rev() {
        let p = perm[col];
        let mut s = x[p];
        for k in col + 1..n {
            s -= m[p * n + k] * out[k];
        }
        out[col] = s / m[p * n + col];
    }
    Some(out)
}
