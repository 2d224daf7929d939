//! Invariants of the dense linear algebra layer.

use krlab_core::linalg::{eigen, kernel, lu_solve, matrix_exp, principal_angles, LuFactors, Subspace};
use krlab_core::matrix::{norm2, normalize};
use krlab_core::{Complex64, RealMatrix};
use proptest::prelude::*;

fn square(max: usize) -> impl Strategy<Value = RealMatrix> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| RealMatrix::new(n, n, v).unwrap())
    })
}

/// Diagonally dominant, so the condition number stays small.
fn well_conditioned(max: usize) -> impl Strategy<Value = RealMatrix> {
    square(max).prop_map(|a| {
        let n = a.rows();
        a.shift_diagonal(n as f64 + 1.0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lu_residual_is_small(a in well_conditioned(8), seed in any::<u64>()) {
        let n = a.rows();
        let b: Vec<f64> = (0..n).map(|i| ((seed >> (i % 60)) & 0xff) as f64 / 255.0 - 0.5).collect();
        let x = lu_solve(&a, &b).unwrap();
        let r: Vec<f64> = a.matvec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
        prop_assert!(norm2(&r) <= 1e-12 * (a.norm_fro() * norm2(&x) + norm2(&b)).max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigenvalues_reproduce_trace_and_determinant(a in square(8)) {
        let d = eigen(&a).unwrap();
        let s = &d.spectrum;
        prop_assert_eq!(s.total_multiplicity(), a.rows());
        let sum: Complex64 = d.values.iter().sum();
        let norm = a.norm_fro().max(1.0);
        prop_assert!((sum.re - a.trace()).abs() <= 1e-8 * norm);
        prop_assert!(sum.im.abs() <= 1e-8 * norm);
        let prod: Complex64 = d.values.iter().product();
        let det = LuFactors::factor(&a).map(|f| f.determinant()).unwrap_or(0.0);
        prop_assert!((prod.re - det).abs() <= 1e-6 * det.abs().max(norm.powi(a.rows() as i32) * 1e-6));
    }

    #[test]
    fn conjugate_pairs_in_the_spectrum(a in square(8)) {
        let s = eigen(&a).unwrap().spectrum;
        for e in &s.eigenvalues {
            if e.value.im != 0.0 {
                let partner = s.find(e.value.conj());
                prop_assert!(partner.is_some());
                prop_assert_eq!(s.eigenvalues[partner.unwrap()].alg_mult, e.alg_mult);
            }
        }
    }

    #[test]
    fn exponential_semigroup_law(a in square(6), s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let norm = a.norm_fro();
        prop_assume!(norm * (s + t) <= 10.0);
        let lhs = matrix_exp(&a, s + t).unwrap();
        let rhs = matrix_exp(&a, s).unwrap().matmul(&matrix_exp(&a, t).unwrap());
        prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-9 * lhs.max_abs().max(1.0));
    }

    #[test]
    fn kernel_of_projector_recovers_subspace(n in 2usize..7, raw in prop::collection::vec(-1.0f64..1.0, 42)) {
        let k = 1 + raw[0].abs().mul_add(10.0, 0.0) as usize % (n - 1);
        let cols: Vec<Vec<f64>> = (0..k).map(|j| raw[1 + j * n..1 + (j + 1) * n].to_vec()).collect();
        let v = Subspace::span(n, &cols, 1e-6);
        prop_assume!(v.dim() == k);
        let b = v.basis();
        let projector = RealMatrix::identity(n).sub(&b.matmul(&b.transpose()));
        let back = kernel(&projector, 1e-8);
        prop_assert_eq!(back.dim(), v.dim());
        let worst = principal_angles(&v, &back).into_iter().fold(0.0, f64::max);
        prop_assert!(worst < 1e-10);
    }

    #[test]
    fn basis_is_orthonormal(n in 1usize..7, raw in prop::collection::vec(-1.0f64..1.0, 36)) {
        let cols: Vec<Vec<f64>> = raw.chunks(n).take(n).map(<[f64]>::to_vec).filter(|c| c.len() == n).collect();
        let v = Subspace::span(n, &cols, 1e-10);
        let b = v.basis();
        let gram = b.transpose().matmul(b);
        prop_assert!(gram.sub(&RealMatrix::identity(v.dim())).max_abs() <= 1e-12);
        prop_assert!(v.dim() <= n);
    }
}

#[test]
fn null_space_of_all_ones() {
    let v = kernel(&RealMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap(), 1e-10);
    assert_eq!(v.dim(), 1);
    let mut w = v.basis_vectors().remove(0);
    normalize(&mut w);
    assert!((w[0] + w[1]).abs() < 1e-14);
}
