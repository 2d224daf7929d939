//! Spectral objects of a matrix operator: resolvents, real generalized
//! eigenspaces, spectral splits and spectral bounds.
//!
//! In finite dimensions the essential spectrum is empty, so the essential
//! spectral bound is `−∞` and the essential radius is `0`; both are carried
//! explicitly so reports can state them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::OnceCell;

use num_complex::Complex64;

use crate::kr::{KrCheck, Witness};
use crate::linalg::eigen::{eigen_with_tol, EigenDecomposition, DEFAULT_CLUSTER_RTOL};
use crate::linalg::lu::LuFactors;
use crate::linalg::subspace::{kernel, orthonormal_basis, principal_angles, Subspace};
use crate::matrix::RealMatrix;
use crate::{Error, Result};

pub use crate::linalg::eigen::{Spectrum, SpectrumEntry};

/// Essential spectral bound `spb_e` (empty essential spectrum).
pub const ESSENTIAL_SPECTRAL_BOUND: f64 = f64::NEG_INFINITY;
/// Essential spectral radius `r_e`.
pub const ESSENTIAL_RADIUS: f64 = 0.0;
/// Default kernel tolerance for generalized eigenspaces.
pub const GE_TOL: f64 = 1e-8;
/// Relative invariance residual accepted for eigenvector-based eigenspaces.
const INVARIANCE_RTOL: f64 = 1e-8;
/// Drop tolerance when orthonormalizing eigenvector real/imaginary parts.
const EIGVEC_SPAN_TOL: f64 = 1e-6;

/// A square matrix viewed as an operator, with a lazily computed and cached
/// eigendecomposition.
#[derive(Debug, Clone)]
pub struct OperatorModel {
    a: RealMatrix,
    cluster_tol: f64,
    eigen: OnceCell<core::result::Result<EigenDecomposition, Error>>,
}

impl OperatorModel {
    /// Clustering tolerance defaults to `1e-8·‖A‖∞`.
    pub fn new(a: RealMatrix) -> Result<Self> {
        a.ensure_square()?;
        let cluster_tol = DEFAULT_CLUSTER_RTOL * a.norm_inf();
        Ok(Self { a, cluster_tol, eigen: OnceCell::new() })
    }

    pub fn with_cluster_tol(a: RealMatrix, cluster_tol: f64) -> Result<Self> {
        a.ensure_square()?;
        if !(cluster_tol >= 0.0) {
            return Err(Error::InvalidArgument(format!("cluster tolerance must be >= 0, got {cluster_tol}")));
        }
        Ok(Self { a, cluster_tol, eigen: OnceCell::new() })
    }

    #[inline]
    pub fn matrix(&self) -> &RealMatrix {
        &self.a
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    #[inline]
    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    /// `‖A‖∞`, the scale used for relative tolerances.
    pub fn norm(&self) -> f64 {
        self.a.norm_inf()
    }

    pub fn spb_e(&self) -> f64 {
        ESSENTIAL_SPECTRAL_BOUND
    }

    pub fn r_e(&self) -> f64 {
        ESSENTIAL_RADIUS
    }

    pub fn decomposition(&self) -> Result<&EigenDecomposition> {
        self.eigen.get_or_init(|| eigen_with_tol(&self.a, self.cluster_tol)).as_ref().map_err(Clone::clone)
    }

    pub fn spectrum(&self) -> Result<&Spectrum> {
        Ok(&self.decomposition()?.spectrum)
    }

    /// Cluster index of `mu` or `MuNotInSpectrum`.
    pub fn cluster_index(&self, mu: Complex64) -> Result<usize> {
        self.spectrum()?.find(mu).ok_or(Error::MuNotInSpectrum { re: mu.re, im: mu.im })
    }

    /// Distance from `lambda` to the spectrum.
    pub fn spectral_distance(&self, lambda: f64) -> Result<f64> {
        let z = Complex64::new(lambda, 0.0);
        Ok(self.decomposition()?.values.iter().map(|m| (m - z).norm()).fold(f64::INFINITY, f64::min))
    }
}

/// `(λI − A)^{-1}`; refuses `λ` within `1e-8·‖A‖` of the spectrum.
pub fn resolvent(op: &OperatorModel, lambda: f64) -> Result<RealMatrix> {
    let distance = op.spectral_distance(lambda)?;
    if distance <= DEFAULT_CLUSTER_RTOL * op.norm() {
        return Err(Error::LambdaInSpectrum { lambda, distance });
    }
    resolvent_unchecked(op.matrix(), lambda).map_err(|_| Error::LambdaInSpectrum { lambda, distance })
}

/// `(λI − A)^{-1}` by LU, without consulting the spectrum.
pub fn resolvent_unchecked(a: &RealMatrix, lambda: f64) -> Result<RealMatrix> {
    let shifted = a.scale(-1.0).shift_diagonal(lambda);
    Ok(LuFactors::factor(&shifted)?.inverse())
}

/// Real generalized eigenspace of a clustered eigenvalue. For complex `μ` it
/// is spanned by real and imaginary parts of the complex generalized
/// eigenvectors, so its dimension is twice the multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct GenEigenspace {
    pub mu: Complex64,
    pub real_space: Subspace,
    pub alg_mult: usize,
    pub geo_mult: usize,
    /// Smallest `k` with `ker (A−μ)^k` equal to the whole eigenspace.
    pub max_rank: usize,
    /// Set when the construction had to be completed by force.
    pub diagnostic: Option<String>,
}

impl GenEigenspace {
    pub fn is_complex(&self) -> bool {
        self.real_space.dim() == 2 * self.alg_mult && self.mu.im != 0.0
    }
}

/// Generalized eigenspace of the cluster containing `mu`.
///
/// Fast route: the span of the cluster's eigenvectors, accepted when it has
/// full dimension and is invariant. Otherwise kernels of powers of `A − μ`
/// are grown one step at a time (`K_{j+1} = ker((I − K_jK_jᵀ)(A − μ))`), in a
/// real embedding of the complex matrix when `μ` is not real.
pub fn gen_eigenspace(op: &OperatorModel, mu: Complex64, tol: f64) -> Result<GenEigenspace> {
    let idx = op.cluster_index(mu)?;
    gen_eigenspace_of_cluster(op, idx, tol)
}

pub fn gen_eigenspace_of_cluster(op: &OperatorModel, idx: usize, tol: f64) -> Result<GenEigenspace> {
    let dec = op.decomposition()?;
    let spectrum = &dec.spectrum;
    let entry = spectrum.eigenvalues[idx];
    let real = spectrum.is_real(idx);
    let mu = if real { Complex64::new(entry.value.re, 0.0) } else { entry.value };
    let m = entry.alg_mult;
    let n = op.dim();
    let target = if real { m } else { 2 * m };
    let scale = op.norm().max(f64::MIN_POSITIVE);

    let mut parts: Vec<Vec<f64>> = Vec::new();
    for i in dec.members(idx) {
        let v = &dec.vectors[i];
        parts.push(v.iter().map(|z| z.re).collect());
        if !real {
            parts.push(v.iter().map(|z| z.im).collect());
        }
    }
    let fast = Subspace::span(n, &parts, EIGVEC_SPAN_TOL);
    if fast.dim() == target && fast.invariance_residual(op.matrix()) <= INVARIANCE_RTOL * scale {
        let geo_mult = if m == 1 { 1 } else { geometric_multiplicity(op, mu, real, tol) };
        return Ok(GenEigenspace { mu, real_space: fast, alg_mult: m, geo_mult, max_rank: 1, diagnostic: None });
    }

    let shifted = shifted_embedding(op.matrix(), mu, real);
    let dim_embed = shifted.cols();
    let embed_target = if real { m } else { 2 * m };
    let mut k = kernel(&shifted, tol);
    let geo_embed = k.dim();
    let mut rank = 1;
    let mut diagnostic = None;
    while k.dim() < embed_target {
        let proj = project_out(&k, &shifted);
        let next = kernel(&proj, tol);
        rank += 1;
        if next.dim() <= k.dim() || rank > embed_target {
            // stalled: take the weakest directions of the projected operator
            let svd = crate::linalg::svd::jacobi_svd(&proj);
            let cols: Vec<Vec<f64>> = (0..embed_target).map(|j| svd.v.column(dim_embed - 1 - j)).collect();
            k = Subspace::span(dim_embed, &cols, 1e-12);
            diagnostic = Some(format!(
                "kernel growth stalled at dimension {} of {embed_target}; completed from smallest singular directions",
                next.dim()
            ));
            break;
        }
        k = if next.dim() > embed_target { truncate(&next, embed_target) } else { next };
    }

    let real_space = if real {
        k
    } else {
        let mut halves: Vec<Vec<f64>> = Vec::new();
        for col in k.basis_vectors() {
            halves.push(col[..n].to_vec());
            halves.push(col[n..].to_vec());
        }
        let s = Subspace::span(n, &halves, 1e-8);
        if s.dim() != target {
            diagnostic.get_or_insert_with(|| format!("real form has dimension {} instead of {target}", s.dim()));
        }
        s
    };
    let geo_mult = if m == 1 { 1 } else if real { geo_embed } else { geo_embed / 2 };
    Ok(GenEigenspace { mu, real_space, alg_mult: m, geo_mult, max_rank: rank.min(m), diagnostic })
}

fn truncate(s: &Subspace, k: usize) -> Subspace {
    let cols: Vec<Vec<f64>> = s.basis_vectors().into_iter().take(k).collect();
    Subspace::from_orthonormal(s.ambient_dim(), &cols)
}

/// `A − μI` for real `μ`; the real `2n × 2n` embedding of `A − μI` otherwise.
fn shifted_embedding(a: &RealMatrix, mu: Complex64, real: bool) -> RealMatrix {
    let p = a.shift_diagonal(-mu.re);
    if real {
        return p;
    }
    let q = RealMatrix::identity(a.rows()).scale(-mu.im);
    RealMatrix::complex_embedding(&p, &q)
}

/// `(I − KKᵀ) M`.
fn project_out(k: &Subspace, m: &RealMatrix) -> RealMatrix {
    let b = k.basis();
    let coords = b.transpose().matmul(m);
    m.sub(&b.matmul(&coords))
}

fn geometric_multiplicity(op: &OperatorModel, mu: Complex64, real: bool, tol: f64) -> usize {
    let k = kernel(&shifted_embedding(op.matrix(), mu, real), tol).dim();
    if real {
        k
    } else {
        k / 2
    }
}

/// Real eigenspace `ker(A − μ)` of a real cluster; `{0}` for non-real ones.
pub fn eigenspace(op: &OperatorModel, mu: Complex64, tol: f64) -> Result<Subspace> {
    let idx = op.cluster_index(mu)?;
    eigenspace_of_cluster(op, idx, tol)
}

pub fn eigenspace_of_cluster(op: &OperatorModel, idx: usize, tol: f64) -> Result<Subspace> {
    let dec = op.decomposition()?;
    let n = op.dim();
    if !dec.spectrum.is_real(idx) {
        return Ok(Subspace::zero(n));
    }
    let entry = dec.spectrum.eigenvalues[idx];
    let parts: Vec<Vec<f64>> = dec.members(idx).map(|i| dec.vectors[i].iter().map(|z| z.re).collect()).collect();
    if entry.alg_mult == 1 {
        return Ok(Subspace::span(n, &parts, EIGVEC_SPAN_TOL));
    }
    let mu = Complex64::new(entry.value.re, 0.0);
    let k = kernel(&op.matrix().shift_diagonal(-mu.re), tol);
    if k.dim() > 0 {
        Ok(k)
    } else {
        Ok(Subspace::span(n, &parts, EIGVEC_SPAN_TOL))
    }
}

/// Split of the spectrum at a vertical line `Re z = t`.
#[derive(Debug, Clone)]
pub struct SpectralSplit {
    pub threshold: f64,
    /// Clusters with `Re μ ≥ t`.
    pub sigma1: Vec<Complex64>,
    pub sigma0: Vec<Complex64>,
    pub x1: Subspace,
    pub x0: Subspace,
    /// `min Re Σ₁ − max Re Σ₀` (infinite when one side is empty).
    pub gap: f64,
}

pub fn spectral_split(op: &OperatorModel, t: f64) -> Result<SpectralSplit> {
    let spectrum = op.spectrum()?;
    let tol = spectrum.cluster_tol;
    if let Some(e) = spectrum.eigenvalues.iter().find(|e| (e.value.re - t).abs() <= tol) {
        return Err(Error::ThresholdOnEigenvalue { threshold: t, re: e.value.re });
    }
    let n = op.dim();
    let mut sigma1 = Vec::new();
    let mut sigma0 = Vec::new();
    let mut v1: Vec<Vec<f64>> = Vec::new();
    let mut v0: Vec<Vec<f64>> = Vec::new();
    for (idx, e) in spectrum.eigenvalues.iter().enumerate() {
        let upper = e.value.re >= t;
        if upper {
            sigma1.push(e.value);
        } else {
            sigma0.push(e.value);
        }
        // the conjugate cluster shares the same real space
        if e.value.im < -tol {
            continue;
        }
        let ge = gen_eigenspace_of_cluster(op, idx, GE_TOL)?;
        if upper {
            v1.extend(ge.real_space.basis_vectors());
        } else {
            v0.extend(ge.real_space.basis_vectors());
        }
    }
    let lo1 = sigma1.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let hi0 = sigma0.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(SpectralSplit {
        threshold: t,
        sigma1,
        sigma0,
        x1: Subspace::span(n, &v1, 1e-10),
        x0: Subspace::span(n, &v0, 1e-10),
        gap: lo1 - hi0,
    })
}

/// Spectral bound, boundary spectrum, spectral radius and the essential
/// conventions.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub spb: f64,
    pub sigma_b: Vec<Complex64>,
    pub r: f64,
    pub r_e: f64,
    pub spb_e: f64,
}

pub fn bounds(op: &OperatorModel) -> Result<Bounds> {
    let spectrum = op.spectrum()?;
    let spb = spectrum.spectral_bound();
    let sigma_b = spectrum
        .eigenvalues
        .iter()
        .filter(|e| (e.value.re - spb).abs() <= spectrum.cluster_tol)
        .map(|e| e.value)
        .collect();
    Ok(Bounds { spb, sigma_b, r: spectrum.spectral_radius(), r_e: op.r_e(), spb_e: op.spb_e() })
}

/// Checks `R_λ(A) GE_μ(A) = GE_μ(A) = GE_{(λ−μ)^{-1}}(R_λ(A))` by principal
/// angles. A multiplicity mismatch in the resolvent's clustering is reported
/// as a conditioning diagnostic rather than an error.
pub fn verify_ge_resolvent_identity(op: &OperatorModel, mu: Complex64, lambda: f64, tol: f64) -> Result<KrCheck> {
    let name = format!("ge-resolvent-identity(mu={:.6}{:+.6}i, lambda={lambda:.6})", mu.re, mu.im);
    let ge = gen_eigenspace(op, mu, GE_TOL)?;
    let r = resolvent(op, lambda)?;
    let image_cols: Vec<Vec<f64>> = ge.real_space.basis_vectors().iter().map(|v| r.matvec(v)).collect();
    let image = orthonormal_basis(&image_cols, 1e-10);
    let image = if image.dim() == 0 { Subspace::zero(op.dim()) } else { image };

    let r_op = OperatorModel::new(r)?;
    let nu = (Complex64::new(lambda, 0.0) - ge.mu).inv();
    let mut check = KrCheck::pass(&name, "");
    let ge_r = match gen_eigenspace(&r_op, nu, GE_TOL) {
        Ok(g) => g,
        Err(Error::MuNotInSpectrum { .. }) => {
            return Ok(KrCheck::fail(&name, "(λ−μ)^{-1} not found in the clustered spectrum of the resolvent; eigenvalue is ill-conditioned")
                .with_witness(Witness::Eigenvalue { re: nu.re, im: nu.im })
                .with_tol("cluster_tol_resolvent", r_op.cluster_tol()));
        }
        Err(e) => return Err(e),
    };
    let dims = [ge.real_space.dim(), image.dim(), ge_r.real_space.dim()];
    let angle = |u: &Subspace, v: &Subspace| principal_angles(u, v).into_iter().fold(0.0, f64::max);
    let max_angle = angle(&ge.real_space, &image).max(angle(&ge.real_space, &ge_r.real_space)).max(angle(&image, &ge_r.real_space));
    check = check
        .with_tol("max_principal_angle", max_angle)
        .with_tol("angle_tol", tol)
        .with_tol("alg_mult", ge.alg_mult as f64)
        .with_tol("alg_mult_resolvent", ge_r.alg_mult as f64);
    if dims[0] != dims[1] || dims[0] != dims[2] {
        check.status = crate::kr::Status::Fail;
        check.detail = format!("dimension mismatch {dims:?}; conditioning diagnostic: eigenvalue cluster split differently under the resolvent map");
        check.witness = Some(Witness::Eigenvalue { re: ge.mu.re, im: ge.mu.im });
    } else if max_angle >= tol {
        check.status = crate::kr::Status::Fail;
        check.detail = format!("largest principal angle {max_angle:e} exceeds {tol:e}; conditioning diagnostic");
        check.witness = Some(Witness::Eigenvalue { re: ge.mu.re, im: ge.mu.im });
    } else {
        check.detail = format!("three subspaces of dimension {} agree", dims[0]);
    }
    if let Some(d) = ge.diagnostic.or(ge_r.diagnostic) {
        check.detail.push_str("; ");
        check.detail.push_str(&d);
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rot3() -> OperatorModel {
        OperatorModel::new(RealMatrix::from_rows(&[[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]).unwrap()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn resolvent_examples() {
        let z = OperatorModel::new(RealMatrix::zeros(3, 3)).unwrap();
        assert!(resolvent(&z, 2.0).unwrap().sub(&RealMatrix::identity(3).scale(0.5)).max_abs() < 1e-16);
        let r = resolvent(&rot3(), 1.0).unwrap();
        let want = RealMatrix::from_rows(&[[0.5, -0.5, 0.0], [0.5, 0.5, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        assert!(r.sub(&want).max_abs() < 1e-15);
        let s = OperatorModel::new(RealMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap()).unwrap();
        let want = RealMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap().scale(1.0 / 3.0);
        assert!(resolvent(&s, 4.0).unwrap().sub(&want).max_abs() < 1e-15);
        assert!(matches!(resolvent(&s, 3.0), Err(Error::LambdaInSpectrum { .. })));
    }

    #[test]
    fn generalized_eigenspaces() {
        let d = OperatorModel::new(RealMatrix::from_diagonal(&[3.0, 1.0])).unwrap();
        let g = gen_eigenspace(&d, c(3.0, 0.0), GE_TOL).unwrap();
        assert_eq!((g.real_space.dim(), g.max_rank, g.alg_mult), (1, 1, 1));
        assert!((g.real_space.basis()[(0, 0)].abs() - 1.0).abs() < 1e-15);

        let j = OperatorModel::new(RealMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap()).unwrap();
        let g = gen_eigenspace(&j, c(1.0, 0.0), GE_TOL).unwrap();
        assert_eq!((g.real_space.dim(), g.max_rank, g.alg_mult, g.geo_mult), (2, 2, 2, 1));

        let g = gen_eigenspace(&rot3(), c(0.0, 1.0), GE_TOL).unwrap();
        assert_eq!((g.real_space.dim(), g.alg_mult), (2, 1));
        let plane = Subspace::from_orthonormal(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        assert!(principal_angles(&g.real_space, &plane).iter().all(|a| *a < 1e-14));
        assert!(matches!(gen_eigenspace(&rot3(), c(5.0, 0.0), GE_TOL), Err(Error::MuNotInSpectrum { .. })));
    }

    #[test]
    fn complex_jordan_pair() {
        // rotation block repeated with coupling: eigenvalues ±i, each defective
        let a = RealMatrix::from_rows(&[
            [0.0, -1.0, 1.0, 0.0],
            [1.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let op = OperatorModel::with_cluster_tol(a, 1e-6).unwrap();
        let g = gen_eigenspace(&op, c(0.0, 1.0), GE_TOL).unwrap();
        assert_eq!(g.alg_mult, 2);
        assert_eq!(g.real_space.dim(), 4);
        assert_eq!(g.max_rank, 2);
        assert_eq!(g.geo_mult, 1);
    }

    #[test]
    fn splits() {
        let d = OperatorModel::new(RealMatrix::from_diagonal(&[2.0, -1.0])).unwrap();
        let s = spectral_split(&d, 0.0).unwrap();
        assert_eq!(s.sigma1, vec![c(2.0, 0.0)]);
        assert_eq!((s.x1.dim(), s.x0.dim()), (1, 1));
        let s = spectral_split(&rot3(), -0.5).unwrap();
        assert_eq!((s.sigma1.len(), s.x1.dim(), s.x0.dim()), (3, 3, 0));
        let d = OperatorModel::new(RealMatrix::from_diagonal(&[5.0, 4.0, 1.0])).unwrap();
        assert_eq!(spectral_split(&d, 3.0).unwrap().x1.dim(), 2);
        assert!(matches!(spectral_split(&d, 4.0), Err(Error::ThresholdOnEigenvalue { .. })));
    }

    #[test]
    fn bounds_examples() {
        let b = bounds(&rot3()).unwrap();
        assert_eq!(b.sigma_b.len(), 3);
        assert!(b.spb.abs() < 1e-15 && b.spb_e == f64::NEG_INFINITY && b.r_e == 0.0);
        let s = OperatorModel::new(RealMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap()).unwrap();
        let b = bounds(&s).unwrap();
        assert!((b.spb - 3.0).abs() < 1e-14 && (b.r - 3.0).abs() < 1e-14 && b.sigma_b.len() == 1);
        let m = OperatorModel::new(RealMatrix::identity(2).scale(-1.0)).unwrap();
        let b = bounds(&m).unwrap();
        assert_eq!(b.spb, -1.0);
        assert_eq!(b.sigma_b, vec![c(-1.0, 0.0)]);
    }

    #[test]
    fn resolvent_identity_examples() {
        let d = OperatorModel::new(RealMatrix::from_diagonal(&[3.0, 1.0])).unwrap();
        let chk = verify_ge_resolvent_identity(&d, c(3.0, 0.0), 5.0, 1e-8).unwrap();
        assert_eq!(chk.status, crate::kr::Status::Pass, "{}", chk.detail);
        let j = OperatorModel::new(RealMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap()).unwrap();
        let chk = verify_ge_resolvent_identity(&j, c(1.0, 0.0), 3.0, 1e-8).unwrap();
        assert_eq!(chk.status, crate::kr::Status::Pass, "{}", chk.detail);
        let chk = verify_ge_resolvent_identity(&rot3(), c(0.0, -1.0), 1.0, 1e-8).unwrap();
        assert_eq!(chk.status, crate::kr::Status::Pass, "{}", chk.detail);
    }
}
