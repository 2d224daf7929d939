//! Principal eigenpair, maximum-principle and positivity checks, and the
//! full report for an assembled operator.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{BoundaryCondition, DiscreteOperator};
use crate::kr::{inverse_power_iteration, kr_sectorial_report_with, KrCheck, KrReport, ReportOptions, Witness};
use crate::linalg::expm::matrix_exp;
use crate::linalg::lu::LuFactors;
use crate::matrix::{fix_sign, max_abs_diff, normalize};
use crate::spectral::{eigenspace_of_cluster, resolvent, GE_TOL};
use crate::{Error, Result};

/// Largest operator handled by the dense eigensolver in reports.
pub const MAX_DENSE_UNKNOWNS: usize = 1500;
pub const ELLIPTIC_THEOREM: &str = "elliptic-principal";
/// Agreement required between inverse iteration and the dense solver.
pub const AGREEMENT_TOL: f64 = 1e-8;
const SEMIGROUP_FLOOR: f64 = -1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseComparison {
    pub s: f64,
    pub w: Vec<f64>,
    pub eigenvalue_diff: f64,
    pub eigenvector_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipticPrincipal {
    pub s: f64,
    /// Unit eigenvector oriented to be positive.
    pub w: Vec<f64>,
    pub iterations: usize,
    pub lambda: f64,
    pub min_entry: f64,
    /// Present when the operator is small enough for the dense solver and
    /// the principal eigenvalue is a simple real cluster.
    pub dense: Option<DenseComparison>,
}

/// Inverse iteration at `λ = 1 + max(0, Gershgorin bound)`, started from
/// the constant vector and cross-checked against the dense solver for at
/// most [`MAX_DENSE_UNKNOWNS`] unknowns.
pub fn principal_eigenpair(op: &DiscreteOperator, tol: f64, maxit: usize) -> Result<EllipticPrincipal> {
    let a = op.matrix();
    let n = a.rows();
    let lambda = 1.0 + a.gershgorin_upper().max(0.0);
    let p = inverse_power_iteration(&op.model, lambda, &vec![1.0; n], tol, maxit)?;
    let min_entry = p.eigenvector.iter().copied().fold(f64::INFINITY, f64::min);
    let dense = if n <= MAX_DENSE_UNKNOWNS { dense_principal(op, p.eigenvalue, &p.eigenvector)? } else { None };
    Ok(EllipticPrincipal { s: p.eigenvalue, w: p.eigenvector, iterations: p.iterations, lambda, min_entry, dense })
}

fn dense_principal(op: &DiscreteOperator, s: f64, w: &[f64]) -> Result<Option<DenseComparison>> {
    let spectrum = op.model.spectrum()?;
    let spb = spectrum.spectral_bound();
    let ctol = op.model.cluster_tol();
    let Some(idx) = (0..spectrum.len()).find(|&i| spectrum.is_real(i) && (spectrum.eigenvalues[i].value.re - spb).abs() <= ctol)
    else {
        return Ok(None);
    };
    let es = eigenspace_of_cluster(&op.model, idx, GE_TOL)?;
    if es.dim() != 1 || spectrum.eigenvalues[idx].alg_mult != 1 {
        return Ok(None);
    }
    let mut v = es.basis().column(0);
    normalize(&mut v);
    fix_sign(&mut v);
    let ds = spectrum.eigenvalues[idx].value.re;
    Ok(Some(DenseComparison { s: ds, eigenvalue_diff: (ds - s).abs(), eigenvector_diff: max_abs_diff(&v, w), w: v }))
}

/// Discrete maximum principle: the solution of `(λI − A)u = f` with
/// `f ≥ 0, f ≠ 0` is positive at every unknown.
pub fn comparison_check(op: &DiscreteOperator, lambda: f64, f: &[f64]) -> Result<KrCheck> {
    let name = "comparison-principle";
    let n = op.unknowns();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.len() });
    }
    if f.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument("right-hand side must be nonnegative".into()));
    }
    if lambda < 0.0 {
        return Err(Error::InvalidArgument(format!("lambda = {lambda} must be nonnegative")));
    }
    if f.iter().all(|v| *v == 0.0) {
        return Ok(KrCheck::not_applicable(name, "right-hand side is identically zero"));
    }
    let lu = LuFactors::factor(&op.matrix().scale(-1.0).shift_diagonal(lambda))
        .map_err(|_| Error::LambdaInSpectrum { lambda, distance: 0.0 })?;
    let u = lu.solve(f);
    let (k, umin) = u.iter().copied().enumerate().fold((0, f64::INFINITY), |b, (i, v)| if v < b.1 { (i, v) } else { b });
    let c = KrCheck::from_bool(name, umin > 0.0, &format!("lambda = {lambda}: min u = {umin:e} at unknown {k}"))
        .with_tol("lambda", lambda)
        .with_tol("min_solution", umin);
    Ok(if umin > 0.0 { c } else { c.with_witness(Witness::Vector(u)) })
}

fn min_entry(m: &crate::matrix::RealMatrix) -> (usize, usize, f64) {
    m.min_entry().unwrap_or((0, 0, 0.0))
}

fn sample_label(prefix: &str, key: &str, v: f64) -> String {
    format!("{prefix}:{key}={v}")
}

/// Strong positivity of the discrete resolvent: every entry of `R_λ(A)` is
/// positive for each `λ ≥ 0`.
pub fn resolvent_positivity_scan(op: &DiscreteOperator, lambdas: &[f64]) -> Result<Vec<KrCheck>> {
    let mut out = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        if !(lambda >= 0.0) {
            return Err(Error::InvalidArgument(format!("lambda = {lambda} must be nonnegative")));
        }
        let r = resolvent(&op.model, lambda)?;
        let (i, j, v) = min_entry(&r);
        let name = sample_label("resolvent-scan", "lambda", lambda);
        let c = KrCheck::from_bool(&name, v > 0.0, &format!("smallest resolvent entry {v:e} at ({i},{j})"))
            .with_tol("lambda", lambda)
            .with_tol("min_entry", v);
        out.push(if v > 0.0 { c } else { c.with_witness(Witness::Entry { row: i, col: j, value: v }) });
    }
    Ok(out)
}

/// `e^{tA} ≥ −1e-12` entrywise for every `t`, and `e^{tA} > 0` for `t > 0`.
/// Returns a nonnegativity check per `t` followed by a strict check per
/// positive `t`.
pub fn semigroup_positivity_check(op: &DiscreteOperator, ts: &[f64]) -> Result<Vec<KrCheck>> {
    let mut nonneg = Vec::new();
    let mut strict = Vec::new();
    for &t in ts {
        let e = matrix_exp(op.matrix(), t)?;
        let (i, j, v) = min_entry(&e);
        let ok = v >= SEMIGROUP_FLOOR;
        let c = KrCheck::from_bool(&sample_label("semigroup-nonnegative", "t", t), ok, &format!("smallest entry {v:e} at ({i},{j})"))
            .with_tol("t", t)
            .with_tol("floor", SEMIGROUP_FLOOR)
            .with_tol("min_entry", v);
        nonneg.push(if ok { c } else { c.with_witness(Witness::Entry { row: i, col: j, value: v }) });
        if t > 0.0 {
            let ok = v > 0.0;
            let c = KrCheck::from_bool(
                &sample_label("semigroup-strictly-positive", "t", t),
                ok,
                &format!("smallest entry {v:e} at ({i},{j})"),
            )
            .with_tol("t", t)
            .with_tol("min_entry", v);
            strict.push(if ok { c } else { c.with_witness(Witness::Entry { row: i, col: j, value: v }) });
        }
    }
    nonneg.extend(strict);
    Ok(nonneg)
}

/// Discrete principal eigenvalue of `a u'' − c u` on an interval of length
/// `length` with `n` unknowns, for constant coefficients, no drift and pure
/// Dirichlet or Neumann ends: `−(4a/h²) sin²(kh/2) − c`.
pub fn closed_form_principal(a: f64, c: f64, length: f64, n: usize, left: &BoundaryCondition, right: &BoundaryCondition) -> Option<f64> {
    let kind = |b: &BoundaryCondition| {
        if b.is_dirichlet() {
            Some(false)
        } else if b.is_neumann() {
            Some(true)
        } else {
            None
        }
    };
    let (l, r) = (kind(left)?, kind(right)?);
    let n = n as f64;
    let pi = core::f64::consts::PI;
    let (h, k) = match (l, r) {
        (false, false) => (length / (n + 1.0), pi / length),
        (true, true) => (length / n, 0.0),
        _ => (length / (n + 0.5), pi / (2.0 * length)),
    };
    let s = libm::sin(0.5 * k * h);
    Some(-4.0 * a / (h * h) * s * s - c)
}

/// Sectorial report on the grid-function cone with `λ ∈ max(0, spb) + {1, 10}`
/// and `t ∈ {0.1, 1}`, extended by the coefficient hypotheses, the resolvent
/// and semigroup scans and the inverse-iteration cross-check.
pub fn elliptic_report(op: &DiscreteOperator, seed: u64) -> Result<KrReport> {
    let n = op.unknowns();
    if n > MAX_DENSE_UNKNOWNS {
        return Err(Error::InvalidArgument(format!("{n} unknowns exceed the dense limit {MAX_DENSE_UNKNOWNS}")));
    }
    let spb = op.model.spectrum()?.spectral_bound();
    let base = spb.max(0.0);
    let lambdas = vec![base + 1.0, base + 10.0];
    let ts = vec![0.1, 1.0];
    let opts = ReportOptions { lambda_samples: lambdas.clone(), t_samples: ts.clone(), ..ReportOptions::default() };
    let inner = kr_sectorial_report_with(&op.model, &op.cone, &opts, seed)?;
    let mut rep = KrReport::new(ELLIPTIC_THEOREM, seed);
    rep.checks.push(
        KrCheck::pass("hyp:elliptic-coefficients", &format!("validated at assembly, theta = {:.12e}", op.theta))
            .with_tol("theta", op.theta),
    );
    rep.checks.extend(inner.checks);
    rep.principal = inner.principal;
    rep.notes = inner.notes;
    rep.checks.extend(resolvent_positivity_scan(op, &lambdas)?);
    rep.checks.extend(semigroup_positivity_check(op, &ts)?);
    let p = principal_eigenpair(op, 1e-12, 1000)?;
    rep.checks.push(agreement_check(&p));
    rep.notes.push(String::from("cone interior taken as strict positivity at every unknown node"));
    if op.grid_coefficients {
        rep.notes.push(String::from("coefficients given on a grid: smoothness hypotheses are not verified"));
    }
    Ok(rep)
}

pub(crate) fn agreement_check(p: &EllipticPrincipal) -> KrCheck {
    let name = "principal-power-iteration-agrees";
    let Some(d) = &p.dense else {
        return KrCheck::not_applicable(name, "no simple real principal eigenvalue from the dense solver");
    };
    let ok = d.eigenvalue_diff <= AGREEMENT_TOL && d.eigenvector_diff <= AGREEMENT_TOL;
    let c = KrCheck::from_bool(
        name,
        ok,
        &format!(
            "inverse iteration s = {:.15e} after {} steps; dense s = {:.15e}",
            p.s, p.iterations, d.s
        ),
    )
    .with_tol("tol", AGREEMENT_TOL)
    .with_tol("eigenvalue_diff", d.eigenvalue_diff)
    .with_tol("eigenvector_diff", d.eigenvector_diff)
    .with_tol("iterations", p.iterations as f64);
    if ok {
        c
    } else {
        c.with_witness(Witness::Vector(p.w.clone()))
    }
}
