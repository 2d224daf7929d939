//! Orthonormal bases, numerical kernels and principal angles.

use alloc::vec::Vec;

use super::svd::jacobi_svd;
use crate::matrix::{axpy, dot, norm2, RealMatrix};

/// A linear subspace of `R^ambient_dim` held by an orthonormal basis
/// (the columns of `basis`). The zero subspace has a basis with no columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RealMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: RealMatrix::zeros(ambient_dim, 0) }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: RealMatrix::identity(ambient_dim) }
    }

    /// Wraps columns that are already orthonormal. Checked in debug builds.
    pub fn from_orthonormal(ambient_dim: usize, columns: &[Vec<f64>]) -> Self {
        let basis = RealMatrix::from_columns(ambient_dim, columns);
        debug_assert!(orthonormality_defect(&basis) < 1e-10);
        Self { ambient_dim, basis }
    }

    /// Span of arbitrary vectors, orthonormalized with the given drop
    /// tolerance (see [`orthonormal_basis`]).
    pub fn span(ambient_dim: usize, vectors: &[Vec<f64>], tol: f64) -> Self {
        let cols = pivoted_gram_schmidt(vectors, tol);
        Self { ambient_dim, basis: RealMatrix::from_columns(ambient_dim, &cols) }
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    #[inline]
    pub fn basis(&self) -> &RealMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<f64>> {
        self.basis.columns()
    }

    /// Linear combination `basis · c`.
    pub fn combine(&self, c: &[f64]) -> Vec<f64> {
        self.basis.matvec(c)
    }

    /// Coordinates `basisᵀ x` of the orthogonal projection of `x`.
    pub fn coordinates(&self, x: &[f64]) -> Vec<f64> {
        self.basis.tr_matvec(x)
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        self.combine(&self.coordinates(x))
    }

    /// Distance from `x` to the subspace.
    pub fn distance(&self, x: &[f64]) -> f64 {
        let p = self.project(x);
        let d: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a - b).collect();
        norm2(&d)
    }

    /// `‖(I − VVᵀ) A V‖_F`; zero for an exactly `A`-invariant subspace.
    pub fn invariance_residual(&self, a: &RealMatrix) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let av = a.matmul(&self.basis);
        let coords = self.basis.transpose().matmul(&av);
        av.sub(&self.basis.matmul(&coords)).norm_fro()
    }

    /// Sum of two subspaces.
    pub fn join(&self, other: &Self, tol: f64) -> Self {
        let mut v = self.basis_vectors();
        v.extend(other.basis_vectors());
        Self::span(self.ambient_dim, &v, tol)
    }
}

fn orthonormality_defect(b: &RealMatrix) -> f64 {
    let g = b.transpose().matmul(b);
    g.sub(&RealMatrix::identity(b.cols())).max_abs()
}

/// Orthonormal basis of the span of `vectors` by Gram–Schmidt with column
/// pivoting and one re-orthogonalization pass. A candidate whose residual
/// norm is at most `tol × (largest input norm)` is dropped. Empty input
/// yields the zero subspace of `R^0`.
pub fn orthonormal_basis(vectors: &[Vec<f64>], tol: f64) -> Subspace {
    let ambient = vectors.first().map_or(0, Vec::len);
    Subspace::span(ambient, vectors, tol)
}

fn pivoted_gram_schmidt(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut work: Vec<Vec<f64>> = vectors.to_vec();
    let scale = work.iter().map(|v| norm2(v)).fold(0.0, f64::max);
    let mut out: Vec<Vec<f64>> = Vec::new();
    if scale == 0.0 {
        return out;
    }
    let cutoff = tol * scale;
    let mut remaining: Vec<usize> = (0..work.len()).collect();
    while !remaining.is_empty() {
        let (pos, best) = remaining
            .iter()
            .enumerate()
            .map(|(pos, &k)| (pos, norm2(&work[k])))
            .fold((0, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if best <= cutoff {
            break;
        }
        let k = remaining.swap_remove(pos);
        let mut q = core::mem::take(&mut work[k]);
        // re-orthogonalize against the accepted basis
        for b in &out {
            let c = dot(b, &q);
            axpy(-c, b, &mut q);
        }
        let n = norm2(&q);
        if n <= cutoff {
            continue;
        }
        q.iter_mut().for_each(|x| *x /= n);
        for &j in &remaining {
            let c = dot(&q, &work[j]);
            axpy(-c, &q, &mut work[j]);
        }
        out.push(q);
    }
    out
}

/// Orthonormal basis of the numerical null space: right singular directions
/// with `σ ≤ tol × σ_max` (every direction when `A = 0`).
pub fn kernel(a: &RealMatrix, tol: f64) -> Subspace {
    let n = a.cols();
    let svd = jacobi_svd(a);
    let cutoff = tol * svd.max();
    let cols: Vec<Vec<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cutoff)
        .map(|(j, _)| svd.v.column(j))
        .collect();
    Subspace { ambient_dim: n, basis: RealMatrix::from_columns(n, &cols) }
}

/// Principal angles between two subspaces of the same ambient space,
/// ascending, `min(dim U, dim V)` of them.
///
/// Small angles come from the singular values of `(I − UUᵀ)V` (sines) and
/// large ones from those of `UᵀV` (cosines), which keeps both ends accurate.
pub fn principal_angles(u: &Subspace, v: &Subspace) -> Vec<f64> {
    assert_eq!(u.ambient_dim, v.ambient_dim, "ambient dimension mismatch");
    let (big, small) = if u.dim() >= v.dim() { (u, v) } else { (v, u) };
    let k = small.dim();
    if k == 0 {
        return Vec::new();
    }
    let c = big.basis.transpose().matmul(&small.basis);
    let cos = jacobi_svd(&c).singular_values;
    let residual = small.basis.sub(&big.basis.matmul(&c));
    let mut sin = jacobi_svd(&residual).singular_values;
    sin.reverse();
    (0..k)
        .map(|i| {
            let ci = cos.get(i).copied().unwrap_or(0.0).min(1.0);
            let si = sin[i].min(1.0);
            if ci * ci >= 0.5 {
                libm::asin(si)
            } else {
                libm::acos(ci)
            }
        })
        .collect()
}

/// Equal dimension and largest principal angle below `tol`.
pub fn subspaces_equal(u: &Subspace, v: &Subspace, tol: f64) -> bool {
    u.dim() == v.dim() && principal_angles(u, v).iter().all(|a| *a < tol)
}
