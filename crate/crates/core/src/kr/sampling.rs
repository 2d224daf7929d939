//! Seeded sampling of cone points, biased toward the boundary.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{Cone, ConeLocation};
use crate::linalg::subspace::Subspace;
use crate::matrix::{normalize, norm2};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on the unit sphere of `R^n` (rejection from the cube).
pub(crate) fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = norm2(&v);
        if r > 1e-3 && (n > 3 || r <= 1.0) {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

/// `count` nonzero points of `K`; every other point lies on `∂K`.
pub(crate) fn sample_cone(k: &Cone, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = k.ambient_dim();
    let active = k.active();
    (0..count)
        .map(|i| {
            let boundary = i % 2 == 0;
            match k {
                Cone::IceCream(_) => {
                    let mut head = if n > 1 { unit_vector(rng, n - 1) } else { Vec::new() };
                    if !boundary {
                        let r: f64 = rng.gen();
                        head.iter_mut().for_each(|x| *x *= r);
                    }
                    head.push(1.0);
                    head
                }
                _ => {
                    let mut x: Vec<f64> =
                        active.iter().map(|a| if *a { rng.gen_range(0.0..1.0) + 1e-3 } else { 0.0 }).collect();
                    if boundary {
                        // zero a random nonempty proper subset of the active entries
                        let idx: Vec<usize> = (0..n).filter(|i| active[*i]).collect();
                        if idx.len() > 1 {
                            let keep = idx[rng.gen_range(0..idx.len())];
                            for &i in &idx {
                                if i != keep && rng.gen_bool(0.5) {
                                    x[i] = 0.0;
                                }
                            }
                            let others: Vec<usize> = idx.iter().copied().filter(|i| *i != keep).collect();
                            x[others[rng.gen_range(0..others.len())]] = 0.0;
                        }
                    }
                    x
                }
            }
        })
        .collect()
}

/// `count` seeded nonzero points of `∂K`. A cone with a single active
/// coordinate has no such points; its samples are then interior.
pub fn boundary_samples(k: &Cone, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    sample_cone(k, 2 * count, &mut r).into_iter().step_by(2).collect()
}

/// Unit points of `(V ∩ K) ∖ {0}` starting from a known `witness`: the witness
/// itself, perturbations of its coefficients that stay in `K`, and boundary
/// points found by bisection toward points of `V` outside `K`.
pub(crate) fn sample_slice(
    k: &Cone,
    v: &Subspace,
    witness: &[f64],
    count: usize,
    tol: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    let mut w = witness.to_vec();
    normalize(&mut w);
    out.push(w.clone());
    let d = v.dim();
    if d <= 1 {
        return out;
    }
    let cw = v.coordinates(&w);
    let margin = |x: &[f64]| -> f64 { k.classify(x, tol).map(|c| c.margin).unwrap_or(f64::NEG_INFINITY) };
    let inside = |x: &[f64]| k.location(x, tol).map(ConeLocation::in_cone).unwrap_or(false);
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count {
        attempts += 1;
        let dir = unit_vector(rng, d);
        let scale: f64 = rng.gen_range(0.0..1.0);
        let c: Vec<f64> = cw.iter().zip(&dir).map(|(a, b)| a + scale * b).collect();
        let mut x = v.combine(&c);
        if norm2(&x) < 1e-12 {
            continue;
        }
        normalize(&mut x);
        if !inside(&x) {
            continue;
        }
        if out.len() % 2 == 1 {
            // push toward the boundary along a random direction of V
            let y = v.combine(&unit_vector(rng, d));
            if margin(&y) >= 0.0 {
                out.push(x);
                continue;
            }
            let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
            let at = |s: f64| -> Vec<f64> { x.iter().zip(&y).map(|(p, q)| (1.0 - s) * p + s * q).collect() };
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if margin(&at(mid)) >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let mut b = at(lo);
            if norm2(&b) < 1e-12 {
                continue;
            }
            normalize(&mut b);
            if inside(&b) {
                out.push(b);
            }
        } else {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn cone_samples_are_in_the_cone() {
        let mut r = rng(7);
        for k in [Cone::Orthant(4), Cone::IceCream(3), Cone::GridFunction(vec![true, false, true])] {
            let pts = sample_cone(&k, 40, &mut r);
            assert_eq!(pts.len(), 40);
            let mut on_boundary = 0;
            for p in &pts {
                let loc = k.location(p, 1e-9).unwrap();
                assert!(loc.in_cone());
                on_boundary += usize::from(loc == ConeLocation::Boundary);
            }
            assert!(on_boundary >= 10, "{k:?}");
        }
    }

    #[test]
    fn slice_samples_stay_in_subspace_and_cone() {
        let k = Cone::Orthant(3);
        let v = Subspace::span(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], 1e-12);
        let mut r = rng(1);
        let pts = sample_slice(&k, &v, &[1.0, 1.0, 0.0], 64, 1e-9, &mut r);
        assert!(pts.len() > 32);
        for p in &pts {
            assert!(p[2].abs() < 1e-15);
            assert!(k.location(p, 1e-9).unwrap().in_cone());
        }
        assert!(pts.iter().any(|p| p[0].abs() < 1e-9 || p[1].abs() < 1e-9));
    }

    #[test]
    fn boundary_samples_lie_on_the_boundary() {
        for k in [Cone::IceCream(3), Cone::Orthant(3)] {
            let pts = boundary_samples(&k, 100, 9);
            assert_eq!(pts.len(), 100);
            assert!(pts.iter().all(|p| k.location(p, 1e-12).unwrap() == ConeLocation::Boundary));
        }
    }

    #[test]
    fn same_seed_same_points() {
        let k = Cone::IceCream(3);
        assert_eq!(sample_cone(&k, 10, &mut rng(3)), sample_cone(&k, 10, &mut rng(3)));
    }
}
