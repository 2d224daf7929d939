//! Report-level invariants of the Krein-Rutman checks.

use krlab_core::kr::{
    check_positivity, inverse_power_iteration, kr_bounded_report, kr_sectorial_report, PositivityMode,
};
use krlab_core::matrix::max_abs_diff;
use krlab_core::{Cone, KrReport, OperatorModel, RealMatrix, Status};
use proptest::prelude::*;

fn positive(lo: usize, hi: usize) -> impl Strategy<Value = RealMatrix> {
    (lo..=hi).prop_flat_map(|n| prop::collection::vec(0.01f64..1.0, n * n).prop_map(move |v| RealMatrix::new(n, n, v).unwrap()))
}

/// Positive off-diagonal entries, arbitrary diagonal.
fn metzler(lo: usize, hi: usize) -> impl Strategy<Value = RealMatrix> {
    positive(lo, hi).prop_flat_map(|a| {
        let n = a.rows();
        prop::collection::vec(-3.0f64..1.0, n).prop_map(move |d| {
            let mut m = a.clone();
            for (i, v) in d.iter().enumerate() {
                m.row_mut(i)[i] = *v;
            }
            m
        })
    })
}

fn well_formed(rep: &KrReport) -> Result<(), TestCaseError> {
    for c in &rep.checks {
        if c.status == Status::Fail {
            prop_assert!(c.witness.is_some() || !c.tolerances.is_empty(), "{} fails without evidence", c.name);
        }
    }
    if let Some(p) = &rep.principal {
        let norm: f64 = p.eigenvector.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() <= 1e-12);
        let big = p.eigenvector.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        prop_assert!(big > 0.0);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn strong_positivity_gives_simple_dominant_radius(a in positive(2, 8), seed in any::<u64>()) {
        let op = OperatorModel::new(a).unwrap();
        let k = Cone::Orthant(op.dim());
        let sp = check_positivity(&op, &k, PositivityMode::StronglyPositive, 16, seed).unwrap();
        prop_assert_eq!(sp.status, Status::Pass);
        let rep = kr_bounded_report(&op, &k, seed).unwrap();
        well_formed(&rep)?;
        for name in ["radius-simple-interior", "radius-strictly-dominant", "radius-eigenvector-in-cone"] {
            prop_assert_eq!(rep.status_of(name), Some(Status::Pass), "{}", name);
        }
        prop_assert!(rep.passed());
    }

    #[test]
    fn bounded_report_is_scale_covariant(a in positive(2, 6), c in 0.1f64..10.0, seed in any::<u64>()) {
        let k = Cone::Orthant(a.rows());
        let p = kr_bounded_report(&OperatorModel::new(a.clone()).unwrap(), &k, seed).unwrap().principal.unwrap();
        let q = kr_bounded_report(&OperatorModel::new(a.scale(c)).unwrap(), &k, seed).unwrap().principal.unwrap();
        prop_assert!((q.value - c * p.value).abs() <= 1e-9 * q.value.abs());
        prop_assert!(max_abs_diff(&p.eigenvector, &q.eigenvector) <= 1e-8);
    }

    #[test]
    fn sectorial_report_is_shift_covariant(a in metzler(2, 6), c in -5.0f64..5.0, seed in any::<u64>()) {
        let k = Cone::Orthant(a.rows());
        let report = |m: RealMatrix| {
            let op = OperatorModel::new(m).unwrap();
            let spb = op.spectrum().unwrap().spectral_bound();
            kr_sectorial_report(&op, &k, &[spb + 1.0, spb + 10.0], &[0.1, 1.0], seed).unwrap()
        };
        let r0 = report(a.clone());
        let r1 = report(a.shift_diagonal(c));
        well_formed(&r0)?;
        prop_assert!(r0.passed());
        let (p, q) = (r0.principal.unwrap(), r1.principal.unwrap());
        prop_assert!((q.value - (p.value + c)).abs() <= 1e-9 * (1.0 + p.value.abs() + c.abs()));
        prop_assert!(max_abs_diff(&p.eigenvector, &q.eigenvector) <= 1e-8);
    }

    #[test]
    fn power_iteration_matches_dense_solver(a in metzler(2, 8), seed in any::<u64>()) {
        let op = OperatorModel::new(a).unwrap();
        let k = Cone::Orthant(op.dim());
        let spb = op.spectrum().unwrap().spectral_bound();
        let rep = kr_sectorial_report(&op, &k, &[spb + 1.0], &[0.1], seed).unwrap();
        prop_assume!(rep.status_of("principal-simple") == Some(Status::Pass));
        let p = rep.principal.unwrap();
        let it = inverse_power_iteration(&op, spb + 1.0, &vec![1.0; op.dim()], 1e-14, 5000).unwrap();
        prop_assert!((it.eigenvalue - p.value).abs() <= 1e-8 * (1.0 + p.value.abs()));
        prop_assert!(max_abs_diff(&it.eigenvector, &p.eigenvector) <= 1e-8);
    }

    #[test]
    fn reports_are_deterministic(a in metzler(2, 5), seed in any::<u64>()) {
        let op = OperatorModel::new(a).unwrap();
        let k = Cone::IceCream(op.dim());
        let first = kr_bounded_report(&op, &k, seed).unwrap();
        let second = kr_bounded_report(&op, &k, seed).unwrap();
        prop_assert_eq!(&first, &second);
        well_formed(&first)?;
    }
}
