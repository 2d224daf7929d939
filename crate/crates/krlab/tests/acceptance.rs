//! Acceptance criteria AC1-AC10. Prints one line per criterion and exits
//! nonzero if any criterion fails. Reference values are computed here from
//! closed forms and independent oracles, not read back from the reports.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use krlab::config::{ScenarioConfig, ScenarioKind};
use krlab::run_scenario;
use krlab_core::cone::{subspace_meets_cone, MEMBERSHIP_TOL};
use krlab_core::elliptic::{
    assemble, disjoint_union, elliptic_report, principal_eigenpair, semigroup_positivity_check, BoundaryCondition,
    BoundarySpec, CoefficientSet, DiscreteOperator, MeshSpec, ScalarField,
};
use krlab_core::kr::kr_bounded_report;
use krlab_core::linalg::{eigen, matrix_exp};
use krlab_core::spectral::{bounds, gen_eigenspace_of_cluster, resolvent, verify_ge_resolvent_identity, GE_TOL};
use krlab_core::{Complex64, Cone, OperatorModel, RealMatrix, Status, SubspaceMeet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Id, runtime budget in seconds, criterion.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn dirichlet_1d(n: usize) -> DiscreteOperator {
    let mesh = MeshSpec::interval(0.0, PI, n).unwrap();
    assemble(&mesh, &CoefficientSet::laplacian(), &BoundarySpec::dirichlet()).unwrap()
}

fn mixed_1d(n: usize) -> DiscreteOperator {
    let mesh = MeshSpec::interval(0.0, 1.0, n).unwrap();
    let bc = BoundarySpec::interval(BoundaryCondition::dirichlet(), BoundaryCondition::neumann());
    assemble(&mesh, &CoefficientSet::laplacian(), &bc).unwrap()
}

fn robin_drift_1d() -> DiscreteOperator {
    let co = CoefficientSet::laplacian()
        .with_diffusion(ScalarField::Linear { value: 1.0, gradient: [0.5, 0.0] }, ScalarField::Constant(0.0), ScalarField::Constant(1.0))
        .with_drift(ScalarField::Constant(2.0), ScalarField::Constant(0.0))
        .with_reaction(ScalarField::Sinusoidal { offset: 1.0, amplitude: 0.5, wavenumber: [2.0 * PI, 0.0], phase: 0.0 });
    let bc = BoundarySpec::interval(BoundaryCondition::dirichlet(), BoundaryCondition::robin(1.0, 1.0));
    assemble(&MeshSpec::interval(0.0, 1.0, 80).unwrap(), &co, &bc).unwrap()
}

fn drift_2d() -> DiscreteOperator {
    let co = CoefficientSet::laplacian().with_drift(ScalarField::Constant(1.0), ScalarField::Constant(0.0));
    assemble(&MeshSpec::unit_square(24, 24).unwrap(), &co, &BoundarySpec::dirichlet()).unwrap()
}

/// Observed orders `log(e_i/e_{i+1}) / log(h_i/h_{i+1})` of the principal
/// eigenvalue against `limit`.
fn orders(ops: &[DiscreteOperator], limit: f64) -> Result<Vec<f64>, String> {
    let mut pts = Vec::new();
    for op in ops {
        let p = principal_eigenpair(op, 1e-13, 1000).map_err(err)?;
        pts.push((op.h[0], (p.s - limit).abs()));
    }
    Ok(pts.windows(2).map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln()).collect())
}

fn sign_changes(v: &[f64]) -> usize {
    let s: Vec<bool> = v.iter().filter(|x| x.abs() > 1e-12).map(|x| *x > 0.0).collect();
    s.windows(2).filter(|w| w[0] != w[1]).count()
}

fn ac1() -> Outcome {
    let a = RealMatrix::from_rows(&[[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]).unwrap();
    let op = OperatorModel::new(a.clone()).map_err(err)?;
    let mut vals = eigen(&a).map_err(err)?.values;
    vals.sort_by(|p, q| q.im.total_cmp(&p.im));
    let want = [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)];
    ensure(vals.len() == 3, || format!("{} eigenvalues", vals.len()))?;
    let dev = vals.iter().zip(&want).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
    ensure(dev <= 1e-10, || format!("spectrum deviates by {dev:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst_formula = 0.0f64;
    let mut min_margin = f64::INFINITY;
    for lambda in [0.5, 1.0, 2.0] {
        let d = 1.0 + lambda * lambda;
        let closed = RealMatrix::from_rows(&[[lambda / d, -1.0 / d, 0.0], [1.0 / d, lambda / d, 0.0], [0.0, 0.0, 1.0 / lambda]]).unwrap();
        let r = resolvent(&op, lambda).map_err(err)?;
        worst_formula = worst_formula.max(r.sub(&closed).max_abs());
        // boundary of the ice-cream cone: x3 = |(x1, x2)| > 0
        for _ in 0..1000 {
            let th: f64 = rng.gen_range(0.0..2.0 * PI);
            let rho: f64 = rng.gen_range(0.01..10.0);
            let u = [rho * th.cos(), rho * th.sin(), rho];
            let v = r.matvec(&u);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let margin = (v[2] - v[0].hypot(v[1])) / norm;
            min_margin = min_margin.min(margin);
        }
    }
    ensure(worst_formula <= 1e-12, || format!("resolvent differs from the block formula by {worst_formula:e}"))?;
    ensure(min_margin > 0.0, || format!("a boundary point maps to margin {min_margin:e}"))?;
    let b = bounds(&op).map_err(err)?;
    ensure(b.sigma_b.len() == 3 && b.sigma_b.iter().all(|z| z.re.abs() <= 1e-10), || format!("boundary spectrum {:?}", b.sigma_b))?;

    let cfg = ScenarioConfig::load(&root().join("configs/rotation.toml")).map_err(err)?;
    let dir = tempfile::tempdir().map_err(err)?;
    let art = run_scenario(&cfg, ScenarioKind::Rotation, dir.path()).map_err(err)?;
    ensure(art.exit_code == 0, || format!("rotation scenario exit code {}", art.exit_code))?;
    Ok(format!("spectrum dev {dev:.1e}, formula dev {worst_formula:.1e}, 3000 boundary maps with min margin {min_margin:.3e}, |sigma_b| = 3"))
}

fn ac2() -> Outcome {
    let op = dirichlet_1d(50);
    let h = PI / 51.0;
    let closed = -(4.0 / (h * h)) * (h / 2.0).sin().powi(2);
    let rep = elliptic_report(&op, 2).map_err(err)?;
    let p = rep.principal.as_ref().ok_or("no principal eigenpair")?;
    let dev = (p.value - closed).abs();
    ensure(dev <= 1e-10, || format!("s = {:.16e}, closed form {closed:.16e}", p.value))?;
    ensure(p.eigenvector.iter().all(|v| *v > 0.0), || "eigenvector not strictly positive".into())?;
    ensure(p.alg_mult == 1 && p.geo_mult == 1, || format!("multiplicities {} / {}", p.alg_mult, p.geo_mult))?;
    let b = bounds(&op.model).map_err(err)?;
    ensure(b.sigma_b.len() == 1, || format!("boundary spectrum has {} elements", b.sigma_b.len()))?;
    ensure(rep.status_of("boundary-spectrum-singleton") == Some(Status::Pass), || "singleton check did not pass".into())?;
    let ords = orders(&[25, 50, 100, 200].map(dirichlet_1d), -1.0)?;
    ensure(ords.iter().all(|o| (o - 2.0).abs() <= 0.2), || format!("orders {ords:?}"))?;
    Ok(format!("|s - closed form| = {dev:.1e}, orders {}", fmt_orders(&ords)))
}

fn fmt_orders(o: &[f64]) -> String {
    o.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(", ")
}

fn ac3() -> Outcome {
    let limit = -(PI / 2.0).powi(2);
    let ords = orders(&[25, 50, 100, 200].map(mixed_1d), limit)?;
    ensure(ords.iter().all(|o| (o - 2.0).abs() <= 0.2), || format!("orders {ords:?}"))?;
    let rep = elliptic_report(&mixed_1d(100), 3).map_err(err)?;
    let failed: Vec<&str> = rep.checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.name.as_str()).collect();
    ensure(failed.is_empty(), || format!("failed checks {failed:?}"))?;
    let applicable = rep.checks.iter().filter(|c| c.status == Status::Pass).count();
    Ok(format!("orders {}, {applicable}/{} checks pass at N=100", fmt_orders(&ords), rep.checks.len()))
}

fn ac4() -> Outcome {
    let op = dirichlet_1d(50);
    let spectrum = op.model.spectrum().map_err(err)?.clone();
    let spb = spectrum.spectral_bound();
    let mut lp_trivial = 0;
    for idx in 0..spectrum.len() {
        if (spectrum.eigenvalues[idx].value.re - spb).abs() <= spectrum.cluster_tol {
            continue;
        }
        let ge = gen_eigenspace_of_cluster(&op.model, idx, GE_TOL).map_err(err)?;
        match subspace_meets_cone(&op.cone, &ge.real_space, MEMBERSHIP_TOL).map_err(err)? {
            SubspaceMeet::Trivial => lp_trivial += 1,
            SubspaceMeet::Witness(w) => return Err(format!("eigenvalue {} meets the cone at {w:?}", ge.mu)),
        }
    }
    ensure(lp_trivial == 49, || format!("{lp_trivial} non-principal eigenspaces certified, expected 49"))?;
    let d = eigen(op.matrix()).map_err(err)?;
    let mut order: Vec<usize> = (0..d.values.len()).collect();
    order.sort_by(|&i, &j| d.values[j].re.total_cmp(&d.values[i].re));
    for (k, &i) in order.iter().enumerate() {
        let v: Vec<f64> = d.vectors[i].iter().map(|z| z.re).collect();
        let sc = sign_changes(&v);
        ensure(sc == k, || format!("eigenvector {} has {sc} sign changes", k + 1))?;
    }
    Ok("LP certifies GE ∩ K = {0} for 49 eigenvalues; k-th eigenvector has k-1 sign changes for k = 1..50".into())
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> RealMatrix {
    RealMatrix::from_fn(n, n, |_, _| rng.gen_range(lo..hi))
}

fn ac5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut clean, mut diagnosed, mut combos) = (0, 0, 0);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let n = rng.gen_range(3..=8);
        let op = OperatorModel::new(random_matrix(&mut rng, n, -1.0, 1.0)).map_err(err)?;
        let spectrum = op.spectrum().map_err(err)?.clone();
        let lambda = spectrum.spectral_bound() + 1.0 + rng.gen_range(0.0..2.0);
        let mut ok = true;
        for e in &spectrum.eigenvalues {
            combos += 1;
            let c = verify_ge_resolvent_identity(&op, e.value, lambda, 1e-8).map_err(err)?;
            if let Some(a) = c.tolerances.get("max_principal_angle") {
                worst = worst.max(*a);
            }
            if c.status != Status::Pass {
                ok = false;
                ensure(c.detail.contains("conditioning"), || format!("case {case}: silent failure {:?}", c.detail))?;
            }
        }
        if ok {
            clean += 1;
        } else {
            diagnosed += 1;
        }
    }
    ensure(clean >= 99, || format!("only {clean}/100 cases below 1e-8 ({diagnosed} diagnosed)"))?;
    Ok(format!("{clean}/100 cases clean over {combos} (mu, lambda) pairs, {diagnosed} with conditioning diagnostics, max angle {worst:.1e}"))
}

fn ac6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut min_gap = f64::INFINITY;
    for case in 0..200 {
        let n = rng.gen_range(2..=10);
        let a = RealMatrix::from_fn(n, n, |_, _| rng.gen_range(0.0..1.0) + 1e-3);
        let op = OperatorModel::new(a.clone()).map_err(err)?;
        let rep = kr_bounded_report(&op, &Cone::Orthant(n), case).map_err(err)?;
        for name in ["radius-simple-interior", "radius-strictly-dominant"] {
            ensure(rep.status_of(name) == Some(Status::Pass), || format!("case {case}: {name} is {:?}", rep.status_of(name)))?;
        }
        // independent oracle on the raw eigenvalues
        let vals = eigen(&a).map_err(err)?.values;
        let r = vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let at_r = vals.iter().filter(|z| (z.norm() - r).abs() <= 1e-10).count();
        ensure(at_r == 1, || format!("case {case}: {at_r} eigenvalues of modulus r"))?;
        for z in vals.iter().filter(|z| (z.norm() - r).abs() > 1e-10) {
            ensure(z.norm() <= r - 1e-10, || format!("case {case}: |mu| = {} vs r = {r}", z.norm()))?;
            min_gap = min_gap.min(r - z.norm());
        }
        let p = rep.principal.as_ref().ok_or_else(|| format!("case {case}: no principal eigenvector"))?;
        ensure(p.eigenvector.iter().all(|v| *v > 0.0), || format!("case {case}: eigenvector not interior"))?;
    }
    Ok(format!("200 matrices: r simple, eigenvector interior, smallest gap r - |mu| = {min_gap:.3e}"))
}

fn ac7() -> Outcome {
    let ts = [0.1, 1.0, 10.0];
    let ops = [("1d dirichlet", dirichlet_1d(50)), ("1d mixed", mixed_1d(100)), ("1d robin+drift", robin_drift_1d()), ("2d drift", drift_2d())];
    let mut worst = f64::INFINITY;
    for (name, op) in &ops {
        for c in semigroup_positivity_check(op, &ts).map_err(err)? {
            ensure(c.status == Status::Pass, || format!("{name}: {} failed: {}", c.name, c.detail))?;
        }
        for t in ts {
            let e = matrix_exp(op.matrix(), t).map_err(err)?;
            let m = e.min_entry().unwrap().2;
            ensure(m > 0.0, || format!("{name}: min entry of e^(tA) at t = {t} is {m:e}"))?;
            worst = worst.min(m);
        }
    }
    let d = disjoint_union(&dirichlet_1d(20), &dirichlet_1d(20)).map_err(err)?;
    let checks = semigroup_positivity_check(&d, &ts).map_err(err)?;
    for c in &checks {
        let strict = c.name.starts_with("semigroup-strictly-positive");
        let want = if strict { Status::Fail } else { Status::Pass };
        ensure(c.status == want, || format!("decoupled: {} is {:?}", c.name, c.status))?;
    }
    Ok(format!("4 connected operators strictly positive for t in {{0.1, 1, 10}} (smallest entry {worst:.2e}); decoupled pair fails strict positivity"))
}

fn ac8() -> Outcome {
    let ops = [("1d dirichlet", dirichlet_1d(50)), ("1d mixed", mixed_1d(100)), ("1d robin+drift", robin_drift_1d()), ("2d drift", drift_2d())];
    let mut lines = Vec::new();
    for (name, op) in &ops {
        let p = principal_eigenpair(op, 1e-12, 1000).map_err(err)?;
        let d = p.dense.as_ref().ok_or_else(|| format!("{name}: no dense comparison"))?;
        ensure(d.eigenvalue_diff <= 1e-8 && d.eigenvector_diff <= 1e-8, || {
            format!("{name}: differences {:.1e} / {:.1e}", d.eigenvalue_diff, d.eigenvector_diff)
        })?;
        ensure(p.iterations < 200, || format!("{name}: {} iterations", p.iterations))?;
        lines.push(format!("{name} {} it", p.iterations));
    }
    Ok(lines.join(", "))
}

fn ac9() -> Outcome {
    let op = drift_2d();
    let s = op.model.spectrum().map_err(err)?;
    let top = s.eigenvalues.iter().max_by(|p, q| p.value.re.total_cmp(&q.value.re)).unwrap();
    let norm = op.model.norm();
    ensure(top.value.im.abs() <= 1e-8 * norm, || format!("imaginary part {:e}", top.value.im))?;
    ensure(top.alg_mult == 1, || format!("multiplicity {}", top.alg_mult))?;
    let b = bounds(&op.model).map_err(err)?;
    ensure(b.sigma_b.len() == 1, || format!("boundary spectrum has {} elements", b.sigma_b.len()))?;
    let rep = elliptic_report(&op, 9).map_err(err)?;
    let p = rep.principal.as_ref().ok_or("no principal eigenpair")?;
    ensure(p.eigenvector.iter().all(|v| *v > 0.0), || "eigenvector not strictly positive".into())?;
    ensure(rep.passed(), || "report has unexpected failures".into())?;
    Ok(format!("576 unknowns: s = {:.10}, simple, w > 0 (min {:.2e}), |sigma_b| = 1", top.value.re, p.eigenvector.iter().copied().fold(f64::INFINITY, f64::min)))
}

const SHIPPED: &[(ScenarioKind, &str)] = &[
    (ScenarioKind::Rotation, "rotation.toml"),
    (ScenarioKind::Elliptic1d, "elliptic1d_dirichlet.toml"),
    (ScenarioKind::Elliptic1d, "elliptic1d_mixed.toml"),
    (ScenarioKind::Elliptic1d, "elliptic1d_robin_drift.toml"),
    (ScenarioKind::Elliptic1d, "elliptic1d_decoupled.toml"),
    (ScenarioKind::Elliptic2d, "elliptic2d_drift.toml"),
    (ScenarioKind::Bounded, "bounded_positive.toml"),
    (ScenarioKind::Sectorial, "sectorial_metzler.toml"),
    (ScenarioKind::Sweep, "sweep_dirichlet.toml"),
    (ScenarioKind::Sweep, "sweep_mixed.toml"),
];

fn ac10() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    for (i, (kind, file)) in SHIPPED.iter().enumerate() {
        let cfg = ScenarioConfig::load(&root().join("configs").join(file)).map_err(err)?;
        let mut reports = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("{i}-{rep}"));
            let art = run_scenario(&cfg, *kind, &out).map_err(err)?;
            ensure(art.exit_code == 0, || format!("{file}: exit code {}", art.exit_code))?;
            let mut bytes = std::fs::read(&art.report_path).map_err(err)?;
            for p in &art.data_paths {
                bytes.extend(std::fs::read(p).map_err(err)?);
            }
            reports.push(bytes);
        }
        ensure(reports[0] == reports[1], || format!("{file}: outputs differ between runs"))?;
    }
    Ok(format!("{} shipped scenarios byte-identical across two runs", SHIPPED.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1", 1, ac1),
        ("AC2", 5, ac2),
        ("AC3", 5, ac3),
        ("AC4", 10, ac4),
        ("AC5", 30, ac5),
        ("AC6", 30, ac6),
        ("AC7", 20, ac7),
        ("AC8", 120, ac8),
        ("AC9", 120, ac9),
        ("AC10", 300, ac10),
    ];
    let mut failed = 0;
    for (id, budget, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(budget) => Err(format!("{msg}; exceeded {budget} s budget")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("{id} PASS ({:.2} s) {msg}", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("{id} FAIL ({:.2} s) {msg}", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {}/10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
