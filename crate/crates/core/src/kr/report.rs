//! Conclusion reports for positive bounded operators and for generators of
//! analytic semigroups.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::checks::{flow_in_subspace, hypotheses, matrix_positivity, weak_irreducibility, Analysis};
use super::sampling::{rng, sample_slice};
use super::{KrCheck, KrReport, Principal, Status, Witness, DEFAULT_SAMPLES, DOMINANCE_GAP};
use crate::cone::{Cone, ConeLocation, InteriorMeet, SubspaceMeet, MEMBERSHIP_TOL};
use crate::linalg::subspace::Subspace;
use crate::matrix::{fix_sign, normalize};
use crate::spectral::{OperatorModel, GE_TOL};
use crate::Result;

pub const THEOREM_BOUNDED: &str = "bounded-positive";
pub const THEOREM_SECTORIAL: &str = "sectorial";

const NORMALIZATION_NOTE: &str = "principal eigenvector normalized to Euclidean norm 1 and oriented into the cone";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    /// Resolvent sample points; empty means `spb + {1, 10, 100}`.
    pub lambda_samples: Vec<f64>,
    pub t_samples: Vec<f64>,
    pub samples: usize,
    pub tol: f64,
    pub ge_tol: f64,
    pub gap: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            lambda_samples: Vec::new(),
            t_samples: vec![0.1, 1.0],
            samples: DEFAULT_SAMPLES,
            tol: MEMBERSHIP_TOL,
            ge_tol: GE_TOL,
            gap: DOMINANCE_GAP,
        }
    }
}

impl ReportOptions {
    pub fn lambdas(&self, spb: f64) -> Vec<f64> {
        if self.lambda_samples.is_empty() {
            vec![spb + 1.0, spb + 10.0, spb + 100.0]
        } else {
            self.lambda_samples.clone()
        }
    }
}

fn eigen_witness(mu: num_complex::Complex64) -> Witness {
    Witness::Eigenvalue { re: mu.re, im: mu.im }
}

/// Real cluster at `target` (within the clustering tolerance).
fn real_cluster_at(an: &Analysis, target: f64) -> Option<usize> {
    let ctol = an.op.cluster_tol();
    (0..an.clusters()).find(|&i| an.is_real(i) && (an.value(i).re - target).abs() <= ctol)
}

/// Unit principal eigenvector in `K`: the oriented basis vector of a line,
/// otherwise an interior witness if one exists, else the cone witness.
fn principal_vector(an: &Analysis, idx: usize, cone_witness: &[f64]) -> Result<Vec<f64>> {
    let es = an.eigenspace(idx)?;
    let mut v = if es.dim() == 1 {
        let mut b = es.basis().column(0);
        if crate::matrix::dot(&b, cone_witness) < 0.0 {
            b.iter_mut().for_each(|x| *x = -*x);
        }
        b
    } else if let InteriorMeet::Witness(w) = an.eigenspace_meets_interior(idx)? {
        w.clone()
    } else {
        cone_witness.to_vec()
    };
    normalize(&mut v);
    if !an.cone.is_polyhedral() || v.iter().all(|x| *x >= 0.0) {
        fix_sign(&mut v);
    }
    Ok(v)
}

/// Principal eigenvalue located and its eigenspace meets `K`.
fn principal_in_cone(
    an: &Analysis,
    name: &str,
    target: f64,
    label: &str,
) -> Result<(KrCheck, Option<(usize, Principal)>)> {
    let Some(idx) = real_cluster_at(an, target) else {
        return Ok((
            KrCheck::fail(name, &format!("{label} = {target:.12e} is not a real eigenvalue"))
                .with_witness(Witness::Eigenvalue { re: target, im: 0.0 })
                .with_tol("cluster_tol", an.op.cluster_tol()),
            None,
        ));
    };
    let mu = an.value(idx).re;
    match an.eigenspace_meets_cone(idx)? {
        SubspaceMeet::Trivial => Ok((
            KrCheck::fail(name, &format!("eigenspace of {label} = {mu:.12e} meets the cone only at 0"))
                .with_witness(Witness::Eigenvalue { re: mu, im: 0.0 })
                .with_tol("membership_tol", an.tol),
            None,
        )),
        SubspaceMeet::Witness(w) => {
            let v = principal_vector(an, idx, w)?;
            let ge = an.ge(idx)?;
            let p = Principal { value: mu, eigenvector: v.clone(), alg_mult: an.alg_mult(idx), geo_mult: ge.geo_mult };
            let loc = an.cone.location(&v, an.tol)?;
            let check = KrCheck::pass(
                name,
                &format!("{label} = {mu:.12e} with eigenvector in the cone ({})", loc.as_str()),
            )
            .with_witness(Witness::Vector(v))
            .with_tol("cluster_tol", an.op.cluster_tol())
            .with_tol("membership_tol", an.tol);
            Ok((check, Some((idx, p))))
        }
    }
}

fn multiplicities(an: &Analysis, name: &str, idx: usize, p: &Principal) -> Result<KrCheck> {
    if an.eigenspace_meets_interior(idx)?.is_no() {
        return Ok(KrCheck::not_applicable(name, "no principal eigenvector in the interior"));
    }
    let ok = p.alg_mult == p.geo_mult;
    let mut c = KrCheck::from_bool(name, ok, &format!("algebraic {} / geometric {}", p.alg_mult, p.geo_mult))
        .with_tol("alg_mult", p.alg_mult as f64)
        .with_tol("geo_mult", p.geo_mult as f64)
        .with_tol("ge_tol", an.ge_tol);
    if !ok {
        c = c.with_witness(Witness::Eigenvalue { re: p.value, im: 0.0 });
    }
    Ok(c)
}

/// Complex clusters selected by `keep` have `GE_μ ∩ K = {0}`.
fn complex_ge_misses(an: &Analysis, name: &str, keep: impl Fn(num_complex::Complex64) -> bool) -> Result<KrCheck> {
    let mut count = 0;
    for idx in 0..an.clusters() {
        let mu = an.value(idx);
        if an.is_real(idx) || an.is_lower_conjugate(idx) || !keep(mu) {
            continue;
        }
        count += 1;
        if let SubspaceMeet::Witness(w) = an.ge_meets_cone(idx)? {
            return Ok(KrCheck::fail(name, &format!("GE of {:.6e}{:+.6e}i meets the cone", mu.re, mu.im))
                .with_witness(Witness::Vector(w.clone()))
                .with_tol("eigenvalue_re", mu.re)
                .with_tol("eigenvalue_im", mu.im));
        }
    }
    Ok(KrCheck::pass(name, &format!("{count} conjugate pair(s) checked")).with_tol("membership_tol", an.tol))
}

/// Eigenvectors of the selected real clusters avoid the interior.
fn others_outside_interior(an: &Analysis, name: &str, skip: Option<usize>, keep: impl Fn(num_complex::Complex64) -> bool) -> Result<KrCheck> {
    let mut count = 0;
    for idx in 0..an.clusters() {
        let mu = an.value(idx);
        // complex eigenvectors have no real representative in the cone
        if Some(idx) == skip || !an.is_real(idx) || !keep(mu) {
            continue;
        }
        count += 1;
        if let InteriorMeet::Witness(w) = an.eigenspace_meets_interior(idx)? {
            return Ok(KrCheck::fail(name, &format!("eigenvector of {:.12e} lies in the interior", mu.re))
                .with_witness(Witness::Vector(w.clone()))
                .with_tol("eigenvalue", mu.re));
        }
    }
    Ok(KrCheck::pass(name, &format!("{count} other real eigenvalue(s) checked")).with_tol("membership_tol", an.tol))
}

/// `GE_μ ∩ K = {0}` for every selected cluster other than the principal one.
fn other_ge_misses(an: &Analysis, name: &str, principal: usize, keep: impl Fn(num_complex::Complex64) -> bool) -> Result<KrCheck> {
    let mut count = 0;
    for idx in 0..an.clusters() {
        let mu = an.value(idx);
        if idx == principal || an.is_lower_conjugate(idx) || !keep(mu) {
            continue;
        }
        count += 1;
        if let SubspaceMeet::Witness(w) = an.ge_meets_cone(idx)? {
            return Ok(KrCheck::fail(name, &format!("GE of {:.6e}{:+.6e}i meets the cone", mu.re, mu.im))
                .with_witness(Witness::Vector(w.clone()))
                .with_tol("eigenvalue_re", mu.re)
                .with_tol("eigenvalue_im", mu.im));
        }
    }
    Ok(KrCheck::pass(name, &format!("{count} other cluster(s) checked by cone certification")).with_tol("membership_tol", an.tol))
}

fn simple_interior(an: &Analysis, name: &str, p: &Principal) -> Result<KrCheck> {
    let loc = an.cone.classify(&p.eigenvector, an.tol)?;
    let ok = p.alg_mult == 1 && loc.location == ConeLocation::Interior;
    let mut c = KrCheck::from_bool(
        name,
        ok,
        &format!("algebraic multiplicity {}, eigenvector {}", p.alg_mult, loc.location.as_str()),
    )
    .with_tol("alg_mult", p.alg_mult as f64)
    .with_tol("margin", loc.margin)
    .with_tol("membership_tol", an.tol);
    if !ok {
        c = c.with_witness(if p.alg_mult != 1 {
            Witness::Eigenvalue { re: p.value, im: 0.0 }
        } else {
            Witness::Vector(p.eigenvector.clone())
        });
    }
    Ok(c)
}

fn skipped(names: &[&str], why: &str) -> Vec<KrCheck> {
    names.iter().map(|n| KrCheck::not_applicable(n, why)).collect()
}

/// Positive bounded operator: the radius is an eigenvalue with a cone
/// eigenvector; under weak irreducibility it is simple with an interior
/// eigenvector; under strong positivity it strictly dominates.
pub fn kr_bounded_report(op: &OperatorModel, k: &Cone, seed: u64) -> Result<KrReport> {
    kr_bounded_report_with(op, k, &ReportOptions::default(), seed)
}

pub fn kr_bounded_report_with(op: &OperatorModel, k: &Cone, opts: &ReportOptions, seed: u64) -> Result<KrReport> {
    let an = Analysis::new(op, k, opts.tol, opts.ge_tol)?;
    let spectrum = op.spectrum()?;
    let r = spectrum.spectral_radius();
    let r_e = op.r_e();
    let ctol = op.cluster_tol();
    let mut rep = KrReport::new(THEOREM_BOUNDED, seed);

    let positive = matrix_positivity("hyp:positive", op.matrix(), k, false, opts.samples, seed, opts.tol)?;
    let radius_ok = r > r_e + ctol;
    let radius = KrCheck::from_bool(
        "hyp:radius-exceeds-essential",
        radius_ok,
        &format!("r = {r:.12e} against r_e = {r_e} (empty essential spectrum)"),
    )
    .with_tol("r", r)
    .with_tol("r_e", r_e)
    .with_tol("cluster_tol", ctol);
    let wi = weak_irreducibility(&an)?;
    let sp = matrix_positivity("hyp:strongly-positive", op.matrix(), k, true, opts.samples, seed.wrapping_add(1), opts.tol)?;
    let base_ok = positive.is_pass() && radius_ok;
    let wi_ok = base_ok && wi.is_pass();
    let sp_ok = base_ok && sp.is_pass();
    rep.checks.extend([positive, radius, wi, sp]);

    let beyond_essential = |mu: num_complex::Complex64| mu.norm() > r_e + ctol;
    if !base_ok {
        rep.checks.extend(skipped(
            &[
                "radius-eigenvector-in-cone",
                "radius-multiplicities-coincide",
                "complex-ge-misses-cone",
                "other-eigenvectors-outside-interior",
                "radius-simple-interior",
                "other-ge-misses-cone",
                "radius-strictly-dominant",
            ],
            "operator is not positive with r > r_e",
        ));
        return Ok(rep);
    }
    let (c1, principal) = principal_in_cone(&an, "radius-eigenvector-in-cone", r, "r")?;
    rep.checks.push(c1);
    match &principal {
        Some((idx, p)) => rep.checks.push(multiplicities(&an, "radius-multiplicities-coincide", *idx, p)?),
        None => rep.checks.push(KrCheck::not_applicable("radius-multiplicities-coincide", "no principal eigenvector")),
    }
    rep.checks.push(complex_ge_misses(&an, "complex-ge-misses-cone", beyond_essential)?);
    rep.checks.push(others_outside_interior(
        &an,
        "other-eigenvectors-outside-interior",
        principal.as_ref().map(|p| p.0),
        beyond_essential,
    )?);

    match (&principal, wi_ok) {
        (Some((idx, p)), true) => {
            rep.checks.push(simple_interior(&an, "radius-simple-interior", p)?);
            rep.checks.push(other_ge_misses(&an, "other-ge-misses-cone", *idx, beyond_essential)?);
        }
        (None, true) => rep.checks.extend(skipped(&["radius-simple-interior", "other-ge-misses-cone"], "no principal eigenvector")),
        _ => rep.checks.extend(skipped(&["radius-simple-interior", "other-ge-misses-cone"], "weak irreducibility not established")),
    }
    match (&principal, sp_ok) {
        (Some((idx, _)), true) => rep.checks.push(dominance(&an, *idx, r, opts.gap)),
        (None, true) => rep.checks.push(KrCheck::not_applicable("radius-strictly-dominant", "no principal eigenvector")),
        _ => rep.checks.push(KrCheck::not_applicable("radius-strictly-dominant", "strong positivity not established")),
    }
    if let Some((_, p)) = principal {
        rep.principal = Some(p);
        rep.notes.push(NORMALIZATION_NOTE.into());
    }
    Ok(rep)
}

fn dominance(an: &Analysis, principal: usize, r: f64, gap: f64) -> KrCheck {
    let name = "radius-strictly-dominant";
    let mut worst = f64::NEG_INFINITY;
    let mut worst_mu = None;
    for idx in (0..an.clusters()).filter(|i| *i != principal) {
        let mu = an.value(idx);
        if mu.norm() > worst {
            worst = mu.norm();
            worst_mu = Some(mu);
        }
    }
    let Some(mu) = worst_mu else {
        return KrCheck::pass(name, "r is the only eigenvalue").with_tol("gap", gap);
    };
    let ok = worst <= r - gap;
    let c = KrCheck::from_bool(name, ok, &format!("largest other modulus {worst:.12e} against r = {r:.12e}"))
        .with_tol("gap", gap)
        .with_tol("largest_other_modulus", worst)
        .with_tol("r", r);
    if ok {
        c
    } else {
        c.with_witness(eigen_witness(mu))
    }
}

/// Generator of an analytic semigroup: hypotheses first, then the principal
/// eigenvalue conclusions, their strong-positivity refinement and the
/// boundary-spectrum conclusion.
pub fn kr_sectorial_report(
    op: &OperatorModel,
    k: &Cone,
    lambda_samples: &[f64],
    t_samples: &[f64],
    seed: u64,
) -> Result<KrReport> {
    let opts = ReportOptions { lambda_samples: lambda_samples.to_vec(), t_samples: t_samples.to_vec(), ..ReportOptions::default() };
    kr_sectorial_report_with(op, k, &opts, seed)
}

pub fn kr_sectorial_report_with(op: &OperatorModel, k: &Cone, opts: &ReportOptions, seed: u64) -> Result<KrReport> {
    let an = Analysis::new(op, k, opts.tol, opts.ge_tol)?;
    let spb = op.spectrum()?.spectral_bound();
    let s_e = op.spb_e();
    let mut rep = KrReport::new(THEOREM_SECTORIAL, seed);
    let hyps = hypotheses(&an, &opts.lambdas(spb), &opts.t_samples, opts.samples, seed)?;
    let passed = |name: &str| hyps.iter().any(|c| c.name == name && c.status == Status::Pass);
    let base_ok = passed("hyp:sectorial") && passed("hyp:resolvent-positive") && passed("hyp:essential-bound-gap") && passed("hyp:ge-in-subspace");
    let a4 = base_ok && passed("hyp:resolvent-strongly-positive");
    let a5 = a4 && passed("hyp:semigroup-interior-on-ge");
    rep.checks.extend(hyps);

    let above_essential = |mu: num_complex::Complex64| mu.re > s_e;
    if !base_ok {
        rep.checks.extend(skipped(
            &[
                "principal-eigenvector-in-cone",
                "principal-multiplicities-coincide",
                "other-eigenvectors-outside-interior",
                "complex-ge-misses-cone",
                "principal-simple",
                "principal-eigenvector-interior",
                "other-ge-misses-cone",
                "boundary-spectrum-singleton",
                "semigroup-interior-on-boundary-spectrum",
            ],
            "standing hypotheses not met",
        ));
        return Ok(rep);
    }
    let (c1, principal) = principal_in_cone(&an, "principal-eigenvector-in-cone", spb, "s")?;
    rep.checks.push(c1);
    match &principal {
        Some((idx, p)) => rep.checks.push(multiplicities(&an, "principal-multiplicities-coincide", *idx, p)?),
        None => rep.checks.push(KrCheck::not_applicable("principal-multiplicities-coincide", "no principal eigenvector")),
    }
    rep.checks.push(others_outside_interior(
        &an,
        "other-eigenvectors-outside-interior",
        principal.as_ref().map(|p| p.0),
        above_essential,
    )?);
    rep.checks.push(complex_ge_misses(&an, "complex-ge-misses-cone", above_essential)?);

    match (&principal, a4) {
        (Some((idx, p)), true) => {
            let simple = KrCheck::from_bool("principal-simple", p.alg_mult == 1, &format!("algebraic multiplicity {}", p.alg_mult))
                .with_tol("alg_mult", p.alg_mult as f64)
                .with_tol("cluster_tol", op.cluster_tol());
            rep.checks.push(if simple.is_pass() { simple } else { simple.with_witness(Witness::Eigenvalue { re: p.value, im: 0.0 }) });
            let loc = k.classify(&p.eigenvector, opts.tol)?;
            let interior = loc.location == ConeLocation::Interior;
            let c = KrCheck::from_bool("principal-eigenvector-interior", interior, &format!("eigenvector {}", loc.location.as_str()))
                .with_tol("margin", loc.margin)
                .with_tol("membership_tol", opts.tol);
            rep.checks.push(if interior { c } else { c.with_witness(Witness::Vector(p.eigenvector.clone())) });
            rep.checks.push(other_ge_misses(&an, "other-ge-misses-cone", *idx, above_essential)?);
        }
        (None, true) => rep.checks.extend(skipped(
            &["principal-simple", "principal-eigenvector-interior", "other-ge-misses-cone"],
            "no principal eigenvector",
        )),
        _ => rep.checks.extend(skipped(
            &["principal-simple", "principal-eigenvector-interior", "other-ge-misses-cone"],
            "strong resolvent positivity not established",
        )),
    }
    if a5 {
        rep.checks.push(boundary_singleton(&an, spb));
        rep.checks.push(boundary_flow(&an, spb, opts, seed)?);
    } else {
        rep.checks.extend(skipped(
            &["boundary-spectrum-singleton", "semigroup-interior-on-boundary-spectrum"],
            "strong positivity hypotheses not established",
        ));
    }
    if let Some((_, p)) = principal {
        rep.principal = Some(p);
        rep.notes.push(NORMALIZATION_NOTE.into());
    }
    Ok(rep)
}

fn boundary_clusters(an: &Analysis, spb: f64) -> Vec<usize> {
    let ctol = an.op.cluster_tol();
    (0..an.clusters()).filter(|&i| (an.value(i).re - spb).abs() <= ctol).collect()
}

fn boundary_singleton(an: &Analysis, spb: f64) -> KrCheck {
    let members = boundary_clusters(an, spb);
    let ok = members.len() == 1;
    let list: Vec<String> = members
        .iter()
        .map(|&i| {
            let mu = an.value(i);
            format!("{:.6e}{:+.6e}i", mu.re, mu.im)
        })
        .collect();
    let c = KrCheck::from_bool(
        "boundary-spectrum-singleton",
        ok,
        &format!("boundary spectrum has {} element(s): {{{}}}", members.len(), list.join(", ")),
    )
    .with_tol("boundary_spectrum_size", members.len() as f64)
    .with_tol("cluster_tol", an.op.cluster_tol());
    match members.iter().find(|&&i| an.value(i).im != 0.0 && !an.is_real(i)) {
        Some(&i) if !ok => c.with_witness(eigen_witness(an.value(i))),
        _ => c,
    }
}

/// Interior flow on the sum `Y'` of the generalized eigenspaces of the
/// boundary spectrum, sampled over `Y' ∩ K`. This is the positivity the
/// boundary-spectrum conclusion actually rests on; it can fail while every
/// individual slice `GE_μ ∩ K` flows inside.
fn boundary_flow(an: &Analysis, spb: f64, opts: &ReportOptions, seed: u64) -> Result<KrCheck> {
    let name = "semigroup-interior-on-boundary-spectrum";
    let mut y = Subspace::zero(an.op.dim());
    for i in boundary_clusters(an, spb) {
        if !an.is_lower_conjugate(i) {
            y = y.join(&an.ge(i)?.real_space, 1e-10);
        }
    }
    let meet = crate::cone::subspace_meets_cone(an.cone, &y, an.tol)?;
    let SubspaceMeet::Witness(w) = meet else {
        return Ok(KrCheck::pass(name, "sum of boundary generalized eigenspaces meets the cone only at 0"));
    };
    let mut r = rng(seed ^ 0xb0b0);
    let points = sample_slice(an.cone, &y, &w, opts.samples, an.tol, &mut r);
    let mut min_margin = f64::INFINITY;
    for g in &points {
        for &t in opts.t_samples.iter().filter(|t| **t > 0.0) {
            let mut u = flow_in_subspace(an.op.matrix(), &y, spb, g, t)?;
            normalize(&mut u);
            let loc = an.cone.classify(&u, an.tol)?;
            min_margin = min_margin.min(loc.margin);
            if loc.location != ConeLocation::Interior {
                return Ok(KrCheck::fail(
                    name,
                    &format!("point of the boundary-spectrum cone stays {} at t = {t}", loc.location.as_str()),
                )
                .with_witness(Witness::Vector(g.clone()))
                .with_tol("t", t)
                .with_tol("margin", loc.margin)
                .with_tol("subspace_dim", y.dim() as f64));
            }
        }
    }
    Ok(KrCheck::pass(name, &format!("{} sampled points flow into the interior", points.len()))
        .with_tol("min_margin", min_margin)
        .with_tol("subspace_dim", y.dim() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RealMatrix;

    fn op(rows: &[[f64; 2]]) -> OperatorModel {
        OperatorModel::new(RealMatrix::from_rows(rows).unwrap()).unwrap()
    }

    fn statuses(rep: &KrReport) -> Vec<(&str, Status)> {
        rep.checks.iter().map(|c| (c.name.as_str(), c.status)).collect()
    }

    #[test]
    fn positive_symmetric_two_by_two() {
        let rep = kr_bounded_report(&op(&[[2.0, 1.0], [1.0, 2.0]]), &Cone::Orthant(2), 1).unwrap();
        for c in &rep.checks {
            assert_eq!(c.status, Status::Pass, "{}: {}", c.name, c.detail);
        }
        let p = rep.principal.unwrap();
        assert!((p.value - 3.0).abs() < 1e-12);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((p.eigenvector[0] - h).abs() < 1e-12 && (p.eigenvector[1] - h).abs() < 1e-12);
    }

    #[test]
    fn identity_is_not_weakly_irreducible() {
        let rep = kr_bounded_report(&op(&[[1.0, 0.0], [0.0, 1.0]]), &Cone::Orthant(2), 1).unwrap();
        assert_eq!(rep.status_of("radius-eigenvector-in-cone"), Some(Status::Pass));
        assert_eq!(rep.status_of("hyp:weakly-irreducible"), Some(Status::Fail));
        assert_eq!(rep.status_of("radius-simple-interior"), Some(Status::NotApplicable));
        assert_eq!(rep.status_of("radius-multiplicities-coincide"), Some(Status::Pass));
    }

    #[test]
    fn swap_matrix() {
        let rep = kr_bounded_report(&op(&[[0.0, 1.0], [1.0, 0.0]]), &Cone::Orthant(2), 1).unwrap();
        assert_eq!(rep.status_of("other-eigenvectors-outside-interior"), Some(Status::Pass));
        assert_eq!(rep.status_of("radius-strictly-dominant"), Some(Status::NotApplicable));
        assert!((rep.principal.unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_example_fails_only_on_boundary_spectrum() {
        let a = OperatorModel::new(RealMatrix::from_rows(&[[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]).unwrap()).unwrap();
        let rep = kr_sectorial_report(&a, &Cone::IceCream(3), &[0.5, 1.0, 2.0], &[0.1, 1.0], 7).unwrap();
        for (name, status) in statuses(&rep) {
            let expected = if name == "boundary-spectrum-singleton" || name == "semigroup-interior-on-boundary-spectrum" {
                Status::Fail
            } else {
                Status::Pass
            };
            assert_eq!(status, expected, "{name}");
        }
        let p = rep.principal.unwrap();
        assert!(p.value.abs() < 1e-12);
        assert!((p.eigenvector[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repeated_decay_has_no_strong_conclusions() {
        let rep = kr_sectorial_report(&op(&[[-1.0, 0.0], [0.0, -1.0]]), &Cone::Orthant(2), &[], &[0.1, 1.0], 3).unwrap();
        assert_eq!(rep.status_of("hyp:resolvent-strongly-positive"), Some(Status::Fail));
        assert_eq!(rep.status_of("principal-simple"), Some(Status::NotApplicable));
        let p = rep.principal.unwrap();
        assert_eq!((p.alg_mult, p.geo_mult), (2, 2));
        assert!((p.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_entries_make_bounded_report_inapplicable() {
        let rep = kr_bounded_report(&op(&[[1.0, -1.0], [0.0, 1.0]]), &Cone::Orthant(2), 0).unwrap();
        assert_eq!(rep.status_of("hyp:positive"), Some(Status::Fail));
        assert!(rep.checks.iter().skip(4).all(|c| c.status == Status::NotApplicable));
    }
}
