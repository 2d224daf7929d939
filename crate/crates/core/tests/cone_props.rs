//! Cone geometry and subspace certification invariants.

use krlab_core::cone::{subspace_meets_cone, subspace_meets_interior, MEMBERSHIP_TOL};
use krlab_core::kr::boundary_samples;
use krlab_core::{Cone, ConeLocation, InteriorMeet, SubspaceMeet, Subspace};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cone() -> impl Strategy<Value = Cone> {
    prop_oneof![
        (1usize..7).prop_map(Cone::Orthant),
        (2usize..7).prop_map(Cone::IceCream),
        prop::collection::vec(any::<bool>(), 1..7).prop_map(Cone::GridFunction),
    ]
}

/// Cones with a nonzero boundary: at least two active coordinates.
fn cone_with_boundary() -> impl Strategy<Value = Cone> {
    prop_oneof![
        (2usize..7).prop_map(Cone::Orthant),
        (2usize..7).prop_map(Cone::IceCream),
        (prop::collection::vec(any::<bool>(), 0..5), 0usize..7).prop_map(|(mut m, at)| {
            m.extend([true, true]);
            let len = m.len();
            m.rotate_left(at % len);
            Cone::GridFunction(m)
        }),
    ]
}

fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, n)
}

fn cone_and_points() -> impl Strategy<Value = (Cone, Vec<f64>, Vec<f64>)> {
    cone().prop_flat_map(|k| {
        let n = k.ambient_dim();
        (Just(k), point(n), point(n))
    })
}

fn inside(k: &Cone, x: &[f64]) -> bool {
    k.location(x, MEMBERSHIP_TOL).unwrap().in_cone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn location_is_scale_invariant((k, x, _) in cone_and_points(), s in 0.01f64..100.0) {
        let y: Vec<f64> = x.iter().map(|v| v * s).collect();
        let a = k.classify(&x, 0.0).unwrap();
        let b = k.classify(&y, 0.0).unwrap();
        prop_assert_eq!(a.location, b.location);
    }

    #[test]
    fn cone_is_convex_and_closed_under_scaling((k, x, y) in cone_and_points(), s in 0.0f64..10.0, t in 0.0f64..1.0) {
        let (px, py) = (k.active(), k.active());
        let proj = |v: &[f64], mask: &[bool]| -> Vec<f64> {
            match &k {
                Cone::IceCream(_) => {
                    let mut w = v.to_vec();
                    let head = w[..w.len() - 1].iter().map(|a| a * a).sum::<f64>().sqrt();
                    let last = w.len() - 1;
                    w[last] = head + w[last].abs();
                    w
                }
                _ => v.iter().zip(mask).map(|(a, m)| if *m { a.abs() } else { 0.0 }).collect(),
            }
        };
        let (x, y) = (proj(&x, &px), proj(&y, &py));
        prop_assert!(inside(&k, &x) && inside(&k, &y));
        let scaled: Vec<f64> = x.iter().map(|v| v * s).collect();
        prop_assert!(inside(&k, &scaled));
        let mix: Vec<f64> = x.iter().zip(&y).map(|(a, b)| t * a + (1.0 - t) * b).collect();
        prop_assert!(inside(&k, &mix));
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let zero = x.iter().all(|v| v.abs() <= MEMBERSHIP_TOL);
        prop_assert!(zero || !inside(&k, &neg));
    }

    #[test]
    fn margin_sign_matches_location((k, x, _) in cone_and_points()) {
        let c = k.classify(&x, MEMBERSHIP_TOL).unwrap();
        match c.location {
            ConeLocation::Interior => prop_assert!(c.margin > 0.0),
            ConeLocation::Outside => prop_assert!(c.margin < 0.0),
            ConeLocation::Boundary => prop_assert!(c.margin.abs() <= MEMBERSHIP_TOL * 1.0f64.max(x.iter().fold(0.0, |m, v| m.max(v.abs())))),
        }
    }

    #[test]
    fn trivial_meet_implies_no_interior_meet(k in cone(), raw in prop::collection::vec(-1.0f64..1.0, 14), d in 1usize..3) {
        let n = k.ambient_dim();
        let cols: Vec<Vec<f64>> = raw.chunks(n).take(d).filter(|c| c.len() == n).map(<[f64]>::to_vec).collect();
        let v = Subspace::span(n, &cols, 1e-8);
        prop_assume!(v.dim() > 0);
        let meet = subspace_meets_cone(&k, &v, MEMBERSHIP_TOL).unwrap();
        let int = subspace_meets_interior(&k, &v, MEMBERSHIP_TOL);
        if let SubspaceMeet::Witness(w) = &meet {
            prop_assert!(inside(&k, w));
            prop_assert!(v.distance(w) <= 1e-8);
        }
        match int {
            Ok(InteriorMeet::Witness(w)) => {
                prop_assert!(!meet.is_trivial());
                prop_assert_eq!(k.location(&w, MEMBERSHIP_TOL).unwrap(), ConeLocation::Interior);
            }
            Ok(InteriorMeet::No) => {}
            Err(_) => prop_assert!(matches!(k, Cone::IceCream(_))),
        }
    }

    #[test]
    fn boundary_samples_are_on_the_boundary(k in cone_with_boundary(), seed in any::<u64>()) {
        for x in boundary_samples(&k, 20, seed) {
            prop_assert!(x.iter().any(|v| *v != 0.0));
            prop_assert_eq!(k.location(&x, MEMBERSHIP_TOL).unwrap(), ConeLocation::Boundary);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// LP answers against brute-force sampling of coefficient vectors.
    #[test]
    fn orthant_lp_agrees_with_sampling(n in 2usize..6, d in 1usize..3, raw in prop::collection::vec(-1.0f64..1.0, 10), seed in any::<u64>()) {
        let k = Cone::Orthant(n);
        let cols: Vec<Vec<f64>> = raw.chunks(n).take(d).filter(|c| c.len() == n).map(<[f64]>::to_vec).collect();
        let v = Subspace::span(n, &cols, 1e-8);
        prop_assume!(v.dim() > 0);
        let meet = subspace_meets_cone(&k, &v, MEMBERSHIP_TOL).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sampled = false;
        for _ in 0..100_000 {
            let c: Vec<f64> = (0..v.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = v.combine(&c);
            if x.iter().all(|e| *e >= 0.0) && x.iter().any(|e| *e > 1e-6) {
                sampled = true;
                break;
            }
        }
        if sampled {
            prop_assert!(!meet.is_trivial());
        }
        if let SubspaceMeet::Witness(w) = meet {
            prop_assert!(inside(&k, &w));
        }
    }
}

#[test]
fn subspace_examples() {
    let span = |cols: &[Vec<f64>]| Subspace::span(cols[0].len(), cols, 1e-10);
    let diag = span(&[vec![1.0, 1.0]]);
    assert!(matches!(subspace_meets_interior(&Cone::Orthant(2), &diag, MEMBERSHIP_TOL).unwrap(), InteriorMeet::Witness(_)));
    let axis = span(&[vec![1.0, 0.0]]);
    assert!(subspace_meets_interior(&Cone::Orthant(2), &axis, MEMBERSHIP_TOL).unwrap().is_no());
    let plane = span(&[vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
    match subspace_meets_interior(&Cone::Orthant(3), &plane, MEMBERSHIP_TOL).unwrap() {
        InteriorMeet::Witness(w) => assert!(w.iter().all(|v| *v > 0.0)),
        InteriorMeet::No => panic!("(1,1,1) lies in the plane"),
    }
}
