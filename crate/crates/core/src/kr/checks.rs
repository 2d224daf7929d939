//! Positivity checks and the standing hypotheses for sectorial operators.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::OnceCell;

use num_complex::Complex64;

use super::sampling::{rng, sample_cone, sample_slice};
use super::{KrCheck, Status, Witness, ENTRY_TOL};
use crate::cone::{
    boundary_point_in_subspace, subspace_meets_cone, subspace_meets_interior, Cone, ConeLocation, InteriorMeet,
    SubspaceMeet,
};
use crate::linalg::expm::matrix_exp;
use crate::linalg::subspace::Subspace;
use crate::matrix::{normalize, RealMatrix};
use crate::spectral::{
    eigenspace_of_cluster, gen_eigenspace_of_cluster, resolvent, GenEigenspace, OperatorModel,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositivityMode {
    Positive,
    StronglyPositive,
    WeaklyIrreducible,
}

/// Per-cluster spectral objects and cone certificates, computed on demand
/// and shared by all checks of one report.
pub(crate) struct Analysis<'a> {
    pub op: &'a OperatorModel,
    pub cone: &'a Cone,
    pub tol: f64,
    pub ge_tol: f64,
    ge: Vec<OnceCell<core::result::Result<GenEigenspace, Error>>>,
    es: Vec<OnceCell<core::result::Result<Subspace, Error>>>,
    ge_meets: Vec<OnceCell<core::result::Result<SubspaceMeet, Error>>>,
    es_meets: Vec<OnceCell<core::result::Result<SubspaceMeet, Error>>>,
    es_interior: Vec<OnceCell<core::result::Result<InteriorMeet, Error>>>,
}

impl<'a> Analysis<'a> {
    pub fn new(op: &'a OperatorModel, cone: &'a Cone, tol: f64, ge_tol: f64) -> Result<Self> {
        if cone.ambient_dim() != op.dim() {
            return Err(Error::DimensionMismatch { expected: op.dim(), found: cone.ambient_dim() });
        }
        let m = op.spectrum()?.len();
        Ok(Self {
            op,
            cone,
            tol,
            ge_tol,
            ge: cells(m),
            es: cells(m),
            ge_meets: cells(m),
            es_meets: cells(m),
            es_interior: cells(m),
        })
    }

    pub fn clusters(&self) -> usize {
        self.ge.len()
    }

    pub fn value(&self, idx: usize) -> Complex64 {
        self.op.spectrum().map(|s| s.eigenvalues[idx].value).unwrap_or_default()
    }

    pub fn alg_mult(&self, idx: usize) -> usize {
        self.op.spectrum().map(|s| s.eigenvalues[idx].alg_mult).unwrap_or(0)
    }

    pub fn is_real(&self, idx: usize) -> bool {
        self.op.spectrum().map(|s| s.is_real(idx)).unwrap_or(false)
    }

    /// Conjugate clusters with negative imaginary part duplicate the real
    /// generalized eigenspace of their partner.
    pub fn is_lower_conjugate(&self, idx: usize) -> bool {
        !self.is_real(idx) && self.value(idx).im < 0.0
    }

    pub fn ge(&self, idx: usize) -> Result<&GenEigenspace> {
        self.ge[idx].get_or_init(|| gen_eigenspace_of_cluster(self.op, idx, self.ge_tol)).as_ref().map_err(Clone::clone)
    }

    pub fn eigenspace(&self, idx: usize) -> Result<&Subspace> {
        self.es[idx].get_or_init(|| eigenspace_of_cluster(self.op, idx, self.ge_tol)).as_ref().map_err(Clone::clone)
    }

    pub fn ge_meets_cone(&self, idx: usize) -> Result<&SubspaceMeet> {
        self.ge_meets[idx]
            .get_or_init(|| {
                let ge = self.ge(idx)?;
                subspace_meets_cone(self.cone, &ge.real_space, self.tol)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn eigenspace_meets_cone(&self, idx: usize) -> Result<&SubspaceMeet> {
        self.es_meets[idx]
            .get_or_init(|| {
                let es = self.eigenspace(idx)?;
                subspace_meets_cone(self.cone, es, self.tol)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn eigenspace_meets_interior(&self, idx: usize) -> Result<&InteriorMeet> {
        self.es_interior[idx]
            .get_or_init(|| {
                // an eigenspace that misses the cone misses its interior too
                if let Ok(SubspaceMeet::Trivial) = self.eigenspace_meets_cone(idx) {
                    return Ok(InteriorMeet::No);
                }
                let es = self.eigenspace(idx)?;
                subspace_meets_interior(self.cone, es, self.tol)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Unit vector `x / ‖x‖`, `None` for (numerically) zero vectors.
    fn unit(mut x: Vec<f64>) -> Option<Vec<f64>> {
        (normalize(&mut x) > 0.0).then_some(x)
    }

    /// `e^{tA} g` for `g` in the generalized eigenspace of cluster `idx`, up
    /// to the positive factor `e^{t Re μ}`. Real `μ` uses the finite series
    /// `Σ_{j<k} t^j/j! (A−μ)^j g` with `k` the maximal rank; complex `μ` the
    /// exponential of the restriction to the eigenspace.
    pub fn flow_in_ge(&self, idx: usize, g: &[f64], t: f64) -> Result<Vec<f64>> {
        let ge = self.ge(idx)?;
        if ge.mu.im == 0.0 {
            let shifted = self.op.matrix().shift_diagonal(-ge.mu.re);
            let mut term = g.to_vec();
            let mut acc = g.to_vec();
            let mut fact = 1.0;
            for j in 1..ge.max_rank {
                term = shifted.matvec(&term);
                fact *= t / j as f64;
                for (a, b) in acc.iter_mut().zip(&term) {
                    *a += fact * b;
                }
            }
            Ok(acc)
        } else {
            flow_in_subspace(self.op.matrix(), &ge.real_space, ge.mu.re, g, t)
        }
    }
}

/// `W e^{t(WᵀAW − σI)} Wᵀ g` for an invariant subspace with basis `W`.
pub(crate) fn flow_in_subspace(a: &RealMatrix, w: &Subspace, sigma: f64, g: &[f64], t: f64) -> Result<Vec<f64>> {
    let b = w.basis();
    let restricted = b.transpose().matmul(&a.matmul(b)).shift_diagonal(-sigma);
    let e = matrix_exp(&restricted, t)?;
    Ok(w.combine(&e.matvec(&w.coordinates(g))))
}

fn cells<T>(m: usize) -> Vec<OnceCell<T>> {
    (0..m).map(|_| OnceCell::new()).collect()
}

fn active_submatrix_min(m: &RealMatrix, cone: &Cone) -> Option<(usize, usize, f64)> {
    let active = cone.active();
    let n = m.rows();
    let mut best: Option<(usize, usize, f64)> = None;
    // column-major scan so ties resolve to the first column
    for j in (0..n).filter(|j| active[*j]) {
        for i in (0..n).filter(|i| active[*i]) {
            let v = m[(i, j)];
            if best.is_none_or(|b| v < b.2) {
                best = Some((i, j, v));
            }
        }
    }
    best
}

fn unit_column(n: usize, j: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[j] = 1.0;
    e
}

/// Positivity of a matrix `M` on `K`: exact entry tests on orthant-type cones,
/// seeded boundary-biased sampling on the ice-cream cone.
pub(crate) fn matrix_positivity(
    name: &str,
    m: &RealMatrix,
    cone: &Cone,
    strong: bool,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<KrCheck> {
    let n = m.rows();
    if cone.ambient_dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: cone.ambient_dim() });
    }
    if cone.is_polyhedral() {
        let Some((i, j, v)) = active_submatrix_min(m, cone) else {
            return Ok(KrCheck::not_applicable(name, "cone has no active coordinates"));
        };
        let ok = if strong { v > ENTRY_TOL } else { v >= -ENTRY_TOL };
        let rule = if strong { "all entries > 1e-12" } else { "all entries >= -1e-12" };
        let mut c = KrCheck::from_bool(name, ok, &format!("{rule}; smallest entry {v:e} at ({i},{j})"))
            .with_tol("entry_tol", ENTRY_TOL)
            .with_tol("min_entry", v);
        if !ok {
            c = c.with_witness(if strong { Witness::Vector(unit_column(n, j)) } else { Witness::Entry { row: i, col: j, value: v } });
        }
        return Ok(c);
    }
    let mut r = rng(seed);
    let points = sample_cone(cone, samples, &mut r);
    let mut min_margin = f64::INFINITY;
    for x in &points {
        let y = m.matvec(x);
        let located = match Analysis::unit(y) {
            Some(u) => cone.classify(&u, tol)?,
            None => cone.classify(&vec![0.0; n], tol)?,
        };
        min_margin = min_margin.min(located.margin);
        let ok = if strong { located.location == ConeLocation::Interior } else { located.location.in_cone() };
        if !ok {
            return Ok(KrCheck::fail(
                name,
                &format!("sampled cone point maps to {} (margin {:e})", located.location.as_str(), located.margin),
            )
            .with_witness(Witness::Vector(x.clone()))
            .with_tol("membership_tol", tol)
            .with_tol("samples", samples as f64)
            .with_tol("min_margin", located.margin));
        }
    }
    let what = if strong { "interior" } else { "cone" };
    Ok(KrCheck::pass(name, &format!("{} sampled cone points (half on the boundary) map into the {what}", points.len()))
        .with_tol("membership_tol", tol)
        .with_tol("samples", samples as f64)
        .with_tol("min_margin", min_margin))
}

pub fn check_positivity(op: &OperatorModel, k: &Cone, mode: PositivityMode, samples: usize, seed: u64) -> Result<KrCheck> {
    check_positivity_tol(op, k, mode, samples, seed, crate::cone::MEMBERSHIP_TOL)
}

pub(crate) fn check_positivity_tol(
    op: &OperatorModel,
    k: &Cone,
    mode: PositivityMode,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<KrCheck> {
    match mode {
        PositivityMode::Positive => matrix_positivity("hyp:positive", op.matrix(), k, false, samples, seed, tol),
        PositivityMode::StronglyPositive => {
            matrix_positivity("hyp:strongly-positive", op.matrix(), k, true, samples, seed, tol)
        }
        PositivityMode::WeaklyIrreducible => {
            let an = Analysis::new(op, k, tol, crate::spectral::GE_TOL)?;
            weak_irreducibility(&an)
        }
    }
}

/// No eigenvector of a nonnegative real eigenvalue lies on `∂K ∖ {0}`.
///
/// For an eigenspace `E` meeting `K ∖ {0}`: if `dim E = 1` the ray itself is
/// classified; if `dim E ≥ 2` the set `E ∩ K` is a pointed cone of dimension
/// at least two inside `E`, so it always reaches `∂K` and a boundary witness
/// is extracted.
pub(crate) fn weak_irreducibility(an: &Analysis) -> Result<KrCheck> {
    let name = "hyp:weakly-irreducible";
    let ctol = an.op.cluster_tol();
    let mut examined = 0;
    for idx in 0..an.clusters() {
        let mu = an.value(idx);
        if !an.is_real(idx) || mu.re < -ctol {
            continue;
        }
        examined += 1;
        let es = an.eigenspace(idx)?;
        if let Cone::IceCream(_) = an.cone {
            if es.dim() > 3 {
                return Err(Error::UnsupportedCone(format!("eigenspace of dimension {} on the ice-cream cone", es.dim())));
            }
        }
        let SubspaceMeet::Witness(x) = an.eigenspace_meets_cone(idx)? else { continue };
        let boundary = if es.dim() == 1 {
            (an.cone.location(x, an.tol)? == ConeLocation::Boundary).then(|| x.clone())
        } else {
            boundary_point_in_subspace(an.cone, es, an.tol)?
        };
        if let Some(w) = boundary {
            return Ok(KrCheck::fail(name, &format!("eigenvector of eigenvalue {:.12e} lies on the cone boundary", mu.re))
                .with_witness(Witness::Vector(w))
                .with_tol("eigenvalue", mu.re)
                .with_tol("eigenspace_dim", es.dim() as f64)
                .with_tol("membership_tol", an.tol));
        }
    }
    Ok(KrCheck::pass(
        name,
        &format!("{examined} nonnegative real eigenvalue(s) examined; no eigenvector on the boundary"),
    )
    .with_tol("membership_tol", an.tol))
}

/// Hypothesis checks for the sectorial results, in fixed order:
/// sectoriality (vacuous for matrices), resolvent positivity, the essential
/// bound gap, generalized eigenspaces inside the smaller space (vacuous),
/// strong resolvent positivity and interior flow of the generalized
/// eigenspace slices `GE_μ ∩ K`.
pub fn check_hypotheses(
    op: &OperatorModel,
    k: &Cone,
    lambda_samples: &[f64],
    t_samples: &[f64],
    seed: u64,
) -> Result<Vec<KrCheck>> {
    let an = Analysis::new(op, k, crate::cone::MEMBERSHIP_TOL, crate::spectral::GE_TOL)?;
    hypotheses(&an, lambda_samples, t_samples, super::DEFAULT_SAMPLES, seed)
}

pub(crate) fn hypotheses(
    an: &Analysis,
    lambda_samples: &[f64],
    t_samples: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<KrCheck>> {
    let op = an.op;
    let spb = op.spectrum()?.spectral_bound();
    let mut out = Vec::new();
    out.push(KrCheck::pass(
        "hyp:sectorial",
        "every matrix generates an analytic semigroup; holds without computation",
    ));
    out.push(resolvent_family("hyp:resolvent-positive", an, lambda_samples, spb, false, samples, seed)?);
    let gap_ok = op.spb_e() < spb;
    out.push(
        KrCheck::from_bool(
            "hyp:essential-bound-gap",
            gap_ok,
            &format!("essential spectrum is empty: spb_e = -inf < spb = {spb:.12e}"),
        )
        .with_tol("spb", spb)
        .with_tol("spb_e", op.spb_e()),
    );
    out.push(KrCheck::pass(
        "hyp:ge-in-subspace",
        "both spaces coincide in finite dimensions; holds without computation",
    ));
    out.push(resolvent_family("hyp:resolvent-strongly-positive", an, lambda_samples, spb, true, samples, seed)?);
    out.push(semigroup_on_ge(an, t_samples, samples, seed)?);
    Ok(out)
}

fn resolvent_family(
    name: &str,
    an: &Analysis,
    lambdas: &[f64],
    spb: f64,
    strong: bool,
    samples: usize,
    seed: u64,
) -> Result<KrCheck> {
    if lambdas.is_empty() {
        return Ok(KrCheck::not_applicable(name, "no resolvent sample points"));
    }
    if let Some(bad) = lambdas.iter().find(|l| **l <= spb) {
        return Ok(KrCheck::not_applicable(name, &format!("sample lambda = {bad} does not exceed spb = {spb:e}"))
            .with_tol("lambda", *bad)
            .with_tol("spb", spb));
    }
    let mut worst = f64::INFINITY;
    for (i, &lambda) in lambdas.iter().enumerate() {
        let r = resolvent(an.op, lambda)?;
        let c = matrix_positivity(name, &r, an.cone, strong, samples, seed.wrapping_add(i as u64), an.tol)?;
        let m = c.tolerances.get("min_entry").or_else(|| c.tolerances.get("min_margin")).copied().unwrap_or(0.0);
        worst = worst.min(m);
        if c.status != Status::Pass {
            let mut c = c.with_tol("lambda", lambda);
            c.detail = format!("lambda = {lambda}: {}", c.detail);
            return Ok(c);
        }
    }
    let list: Vec<String> = lambdas.iter().map(|l| format!("{l}")).collect();
    Ok(KrCheck::pass(name, &format!("lambda in {{{}}}", list.join(", "))).with_tol("worst_margin", worst).with_tol("membership_tol", an.tol))
}

/// Sampled points of each nontrivial `GE_μ ∩ K` must flow into the interior.
fn semigroup_on_ge(an: &Analysis, t_samples: &[f64], samples: usize, seed: u64) -> Result<KrCheck> {
    let name = "hyp:semigroup-interior-on-ge";
    let mut r = rng(seed ^ 0x5e5e);
    let mut nontrivial = 0;
    let mut checked = 0;
    let mut min_margin = f64::INFINITY;
    for idx in 0..an.clusters() {
        if an.is_lower_conjugate(idx) {
            continue;
        }
        let SubspaceMeet::Witness(w) = an.ge_meets_cone(idx)? else { continue };
        nontrivial += 1;
        let ge = an.ge(idx)?;
        let points = sample_slice(an.cone, &ge.real_space, w, samples, an.tol, &mut r);
        for g in &points {
            for &t in t_samples.iter().filter(|t| **t > 0.0) {
                let u = an.flow_in_ge(idx, g, t)?;
                let loc = match Analysis::unit(u) {
                    Some(u) => an.cone.classify(&u, an.tol)?,
                    None => an.cone.classify(&vec![0.0; g.len()], an.tol)?,
                };
                checked += 1;
                min_margin = min_margin.min(loc.margin);
                if loc.location != ConeLocation::Interior {
                    let mu = ge.mu;
                    return Ok(KrCheck::fail(
                        name,
                        &format!(
                            "point of GE ∩ K for mu = {:.6e}{:+.6e}i stays {} at t = {t}",
                            mu.re,
                            mu.im,
                            loc.location.as_str()
                        ),
                    )
                    .with_witness(Witness::Vector(g.clone()))
                    .with_tol("t", t)
                    .with_tol("margin", loc.margin)
                    .with_tol("membership_tol", an.tol));
                }
            }
        }
    }
    let detail = if nontrivial == 0 {
        String::from("every GE_mu ∩ K is {0}; holds vacuously")
    } else {
        format!("{nontrivial} nontrivial slice(s), {checked} flowed samples all interior")
    };
    Ok(KrCheck::pass(name, &detail)
        .with_tol("min_margin", if checked == 0 { 0.0 } else { min_margin })
        .with_tol("samples", samples as f64)
        .with_tol("membership_tol", an.tol))
}
