//! Eigenvalues of small dense symmetric matrices via cyclic Jacobi rotations.
//!
//! The matrices here are normalized Laplacians of thresholded networks, a few
//! hundred rows at most; plain Jacobi is accurate to machine precision at
//! that scale and keeps the crate dependency-free.

// Index-based sweeps mirror the usual statement of the rotations.
#![allow(clippy::needless_range_loop)]

use alloc::vec::Vec;

/// Eigenvalues of a symmetric matrix, ascending. The input is consumed.
///
/// # Panics
/// Panics if the matrix is not square.
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for row in &a {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    if n == 0 {
        return Vec::new();
    }

    let frobenius: f64 = libm::sqrt(
        a.iter()
            .flat_map(|row| row.iter())
            .map(|v| v * v)
            .sum::<f64>(),
    );
    let tolerance = 1e-15 * frobenius.max(1.0);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if libm::sqrt(2.0 * off) <= tolerance {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                // tan of the rotation angle zeroing a[p][q].
                let tau = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;

                let app = a[p][p];
                let aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r][p];
                    let arq = a[r][q];
                    a[r][p] = c * arp - s * arq;
                    a[p][r] = a[r][p];
                    a[r][q] = s * arp + c * arq;
                    a[q][r] = a[r][q];
                }
            }
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigenvalues.sort_by(f64::total_cmp);
    eigenvalues
}
