//! One-sided (Hestenes) Jacobi SVD.
//!
//! Only singular values and right singular vectors are produced; that is all
//! the kernel and principal-angle computations need. Columns of `A V`
//! are rotated pairwise until mutually orthogonal, so small singular values
//! are obtained to high relative accuracy.

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::{dot, RealMatrix};

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Right singular vectors, one column per singular value.
    pub v: RealMatrix,
}

impl Svd {
    pub fn max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }
}

pub fn jacobi_svd(a: &RealMatrix) -> Svd {
    let n = a.cols();
    // column-major working copies
    let mut u: Vec<Vec<f64>> = a.columns();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    let mut norms: Vec<f64> = u.iter().map(|c| dot(c, c)).collect();
    let eps = f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&u[p], &u[q]);
                if gamma.abs() <= eps * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                let (lo, hi) = u.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s);
                let (lo, hi) = v.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s);
                norms[p] = dot(&u[p], &u[p]);
                norms[q] = dot(&u[q], &u[q]);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sv: Vec<f64> = norms.iter().map(|x| libm::sqrt(*x)).collect();
    order.sort_by(|&i, &j| sv[j].partial_cmp(&sv[i]).unwrap_or(core::cmp::Ordering::Equal));
    let singular_values = order.iter().map(|&j| sv[j]).collect();
    let vcols: Vec<Vec<f64>> = order.iter().map(|&j| core::mem::take(&mut v[j])).collect();
    Svd { singular_values, v: RealMatrix::from_columns(n, &vcols) }
}

#[inline]
fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (xa, yb) = (*a, *b);
        *a = c * xa - s * yb;
        *b = s * xa + c * yb;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_values_sorted() {
        let a = RealMatrix::from_diagonal(&[1.0, -3.0, 2.0]);
        let s = jacobi_svd(&a);
        assert_eq!(s.singular_values, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn rank_one() {
        let a = RealMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        let s = jacobi_svd(&a);
        assert!((s.singular_values[0] - 2.0).abs() < 1e-15);
        assert!(s.singular_values[1] < 1e-15);
        let null = s.v.column(1);
        assert!((null[0] + null[1]).abs() < 1e-15);
    }

    #[test]
    fn wide_matrix() {
        let a = RealMatrix::from_rows(&[[3.0, 0.0, 4.0]]).unwrap();
        let s = jacobi_svd(&a);
        assert!((s.singular_values[0] - 5.0).abs() < 1e-14);
        assert!(s.singular_values[1..].iter().all(|x| *x < 1e-15));
    }
}
