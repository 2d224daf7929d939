//! Cones with membership predicates, and certificates for whether a subspace
//! meets a cone (or its interior) away from the origin.
//!
//! The closure of the cone in a larger space never needs a separate
//! representation here: every space is the same finite-dimensional `R^n`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg::subspace::Subspace;
use crate::lp::{lp_feasible, LpOutcome};
use crate::matrix::{norm2, normalize, RealMatrix};
use crate::{Error, Result};

/// Default membership tolerance.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Default strict margin for interior witnesses of the ice-cream cone.
pub const WITNESS_MARGIN: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cone {
    /// Nonnegative orthant of `R^n`.
    Orthant(usize),
    /// `{x ∈ R^n : x_n ≥ ‖(x_1, …, x_{n−1})‖}`.
    IceCream(usize),
    /// Nonnegative grid functions: entries flagged `true` are active unknowns
    /// subject to the orthant rule; inactive entries must vanish.
    GridFunction(Vec<bool>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConeLocation {
    Interior,
    Boundary,
    Outside,
}

impl ConeLocation {
    pub fn in_cone(self) -> bool {
        !matches!(self, Self::Outside)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Interior => "interior",
            Self::Boundary => "boundary",
            Self::Outside => "outside",
        }
    }
}

/// Classified point. `margin` is `min x_i` over active entries for
/// orthant-type cones and `x_n − ‖head‖` for the ice-cream cone; positive
/// margins mean interior.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeWitness {
    pub point: Vec<f64>,
    pub location: ConeLocation,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubspaceMeet {
    /// Only the origin is shared.
    Trivial,
    /// A unit vector of the subspace lying in the cone.
    Witness(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum InteriorMeet {
    No,
    /// A unit vector of the subspace in the interior of the cone.
    Witness(Vec<f64>),
}

impl SubspaceMeet {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Self::Trivial)
    }
}

impl InteriorMeet {
    pub fn is_no(&self) -> bool {
        matches!(self, Self::No)
    }
}

impl Cone {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Self::Orthant(n) | Self::IceCream(n) => *n,
            Self::GridFunction(mask) => mask.len(),
        }
    }

    pub fn name(&self) -> String {
        use alloc::format;
        match self {
            Self::Orthant(n) => format!("orthant({n})"),
            Self::IceCream(n) => format!("ice-cream({n})"),
            Self::GridFunction(m) => format!("grid-function({} active of {})", m.iter().filter(|a| **a).count(), m.len()),
        }
    }

    /// Orthant-type cones are handled exactly by linear programming.
    pub fn is_polyhedral(&self) -> bool {
        !matches!(self, Self::IceCream(_))
    }

    /// Active coordinates (all of them except for grid functions).
    pub fn active(&self) -> Vec<bool> {
        match self {
            Self::GridFunction(m) => m.clone(),
            _ => vec![true; self.ambient_dim()],
        }
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        let n = self.ambient_dim();
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
        Ok(())
    }

    pub fn classify(&self, x: &[f64], tol: f64) -> Result<ConeWitness> {
        self.check_dim(x.len())?;
        let (location, margin) = match self {
            Self::Orthant(_) => orthant_location(x.iter().copied(), tol),
            Self::GridFunction(mask) => {
                let stray = x.iter().zip(mask).filter(|(_, a)| !**a).map(|(v, _)| v.abs()).fold(0.0, f64::max);
                let (loc, margin) = orthant_location(x.iter().zip(mask).filter(|(_, a)| **a).map(|(v, _)| *v), tol);
                if stray > tol {
                    (ConeLocation::Outside, -stray)
                } else {
                    (loc, margin)
                }
            }
            Self::IceCream(_) => {
                let s = ice_cream_margin(x);
                let last = x.last().copied().unwrap_or(0.0);
                let loc = if s > tol {
                    ConeLocation::Interior
                } else if s.abs() <= tol && last >= -tol {
                    ConeLocation::Boundary
                } else {
                    ConeLocation::Outside
                };
                (loc, s)
            }
        };
        Ok(ConeWitness { point: x.to_vec(), location, margin })
    }

    pub fn location(&self, x: &[f64], tol: f64) -> Result<ConeLocation> {
        Ok(self.classify(x, tol)?.location)
    }
}

fn orthant_location(values: impl Iterator<Item = f64>, tol: f64) -> (ConeLocation, f64) {
    let min = values.fold(f64::INFINITY, f64::min);
    if min == f64::INFINITY {
        // no active coordinates: only the origin
        return (ConeLocation::Boundary, 0.0);
    }
    let loc = if min > tol {
        ConeLocation::Interior
    } else if min >= -tol {
        ConeLocation::Boundary
    } else {
        ConeLocation::Outside
    };
    (loc, min)
}

/// `x_n − ‖(x_1, …, x_{n−1})‖`.
pub fn ice_cream_margin(x: &[f64]) -> f64 {
    match x.split_last() {
        Some((last, head)) => last - norm2(head),
        None => 0.0,
    }
}

/// Does `V ∩ K` contain a nonzero vector?
///
/// Orthant-type cones solve the LP `Vc + δ𝟙 ≥ 0, 𝟙ᵀVc = 1` (with `δ` a tiny
/// relaxation scaled from `tol` so rounding noise in the basis cannot hide a
/// boundary ray). The ice-cream cone maximizes `x_n − ‖head‖` over unit
/// vectors of `V` and reports a witness when the maximum is at least `−tol`.
pub fn subspace_meets_cone(k: &Cone, v: &Subspace, tol: f64) -> Result<SubspaceMeet> {
    k.check_dim(v.ambient_dim())?;
    if v.dim() == 0 {
        return Ok(SubspaceMeet::Trivial);
    }
    match k {
        Cone::IceCream(_) => {
            let (best, x) = ice_cream_search(v)?;
            Ok(if best >= -tol { SubspaceMeet::Witness(x) } else { SubspaceMeet::Trivial })
        }
        _ => {
            let mask = k.active();
            if v.dim() == 1 {
                return Ok(line_meets_orthant(v, &mask, tol));
            }
            let n = v.ambient_dim();
            let delta = tol / libm::sqrt(n as f64);
            match orthant_lp(v, &mask, delta, OrthantTarget::Normalized)? {
                Some(mut x) => {
                    normalize(&mut x);
                    Ok(SubspaceMeet::Witness(x))
                }
                None => Ok(SubspaceMeet::Trivial),
            }
        }
    }
}

/// Does `V` meet the interior of `K`?
///
/// Orthant-type cones solve the LP `Vc ≥ 𝟙` on active coordinates; the
/// normalized witness must also clear `tol`. The ice-cream cone requires the
/// maximized margin to exceed [`WITNESS_MARGIN`].
pub fn subspace_meets_interior(k: &Cone, v: &Subspace, tol: f64) -> Result<InteriorMeet> {
    k.check_dim(v.ambient_dim())?;
    if v.dim() == 0 {
        return Ok(InteriorMeet::No);
    }
    match k {
        Cone::IceCream(_) => {
            let (best, x) = ice_cream_search(v)?;
            Ok(if best > WITNESS_MARGIN.max(tol) { InteriorMeet::Witness(x) } else { InteriorMeet::No })
        }
        _ => {
            let mask = k.active();
            if !mask.iter().any(|a| *a) {
                return Ok(InteriorMeet::No);
            }
            let candidate = if v.dim() == 1 {
                let mut x = v.basis().column(0);
                if active_min(&x, &mask) < 0.0 {
                    x.iter_mut().for_each(|t| *t = -*t);
                }
                Some(x)
            } else {
                orthant_lp(v, &mask, 0.0, OrthantTarget::UnitMargin)?
            };
            Ok(match candidate {
                Some(mut x) => {
                    normalize(&mut x);
                    let ok = k.classify(&x, tol)?.location == ConeLocation::Interior;
                    if ok {
                        InteriorMeet::Witness(x)
                    } else {
                        InteriorMeet::No
                    }
                }
                None => InteriorMeet::No,
            })
        }
    }
}

/// A unit vector of `V ∩ ∂K`, if `V` meets the cone away from the origin
/// somewhere on its boundary.
///
/// Orthant-type cones try one LP per active coordinate with that coordinate
/// pinned to zero. The ice-cream cone walks a great circle of `V` from the
/// best point of the cone to its antipode and bisects the sign change.
pub fn boundary_point_in_subspace(k: &Cone, v: &Subspace, tol: f64) -> Result<Option<Vec<f64>>> {
    k.check_dim(v.ambient_dim())?;
    if v.dim() == 0 {
        return Ok(None);
    }
    match k {
        Cone::IceCream(_) => {
            let (best, a) = ice_cream_search(v)?;
            if best < -tol {
                return Ok(None);
            }
            if best <= tol || v.dim() == 1 {
                return Ok((best <= tol).then_some(a));
            }
            // unit u ∈ V orthogonal to a
            let mut u = Vec::new();
            for b in v.basis_vectors() {
                let c = crate::matrix::dot(&a, &b);
                let mut w: Vec<f64> = b.iter().zip(&a).map(|(x, y)| x - c * y).collect();
                if normalize(&mut w) > 1e-6 {
                    u = w;
                    break;
                }
            }
            let at = |s: f64| -> Vec<f64> {
                a.iter().zip(&u).map(|(p, q)| libm::cos(s) * p + libm::sin(s) * q).collect()
            };
            let (mut lo, mut hi) = (0.0, PI);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if ice_cream_margin(&at(mid)) >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(Some(at(lo)))
        }
        _ => {
            let mask = k.active();
            let n = v.ambient_dim();
            let delta = tol / libm::sqrt(n as f64);
            for i in (0..n).filter(|i| mask[*i]) {
                let mut pinned = mask.clone();
                pinned[i] = false;
                if !pinned.iter().any(|a| *a) {
                    continue;
                }
                if let Some(mut x) = orthant_lp(v, &pinned, delta, OrthantTarget::Normalized)? {
                    normalize(&mut x);
                    return Ok(Some(x));
                }
            }
            Ok(None)
        }
    }
}

fn active_min(x: &[f64], mask: &[bool]) -> f64 {
    x.iter().zip(mask).filter(|(_, a)| **a).map(|(v, _)| *v).fold(f64::INFINITY, f64::min)
}

fn line_meets_orthant(v: &Subspace, mask: &[bool], tol: f64) -> SubspaceMeet {
    let mut x = v.basis().column(0);
    let stray = x.iter().zip(mask).filter(|(_, a)| !**a).map(|(t, _)| t.abs()).fold(0.0, f64::max);
    if stray > tol {
        return SubspaceMeet::Trivial;
    }
    let lo = active_min(&x, mask);
    let hi = x.iter().zip(mask).filter(|(_, a)| **a).map(|(t, _)| *t).fold(f64::NEG_INFINITY, f64::max);
    if lo >= -tol {
        // fallthrough keeps x
    } else if hi <= tol {
        x.iter_mut().for_each(|t| *t = -*t);
    } else {
        return SubspaceMeet::Trivial;
    }
    SubspaceMeet::Witness(x)
}

enum OrthantTarget {
    /// `Vc + δ ≥ 0` on active entries, `𝟙ᵀVc = 1`.
    Normalized,
    /// `Vc ≥ 𝟙` on active entries.
    UnitMargin,
}

/// Returns `Vc` for a feasible `c`, or `None`.
///
/// Unknowns are `(c, x, τ)` with `c` free, `x ≥ 0` one slack per active
/// coordinate and, for the margin variant, `τ ≥ 0`. Active rows read
/// `−(Vc)_i + x_i = δ` (resp. `−(Vc)_i + τ + x_i = 0`), inactive rows
/// `(Vc)_i = 0`, and the last row is `𝟙ᵀVc = 1` (resp. `τ = 1`). The slacks
/// form a ready-made starting basis, so phase 1 needs one artificial for the
/// last row plus one per inactive coordinate.
fn orthant_lp(v: &Subspace, mask: &[bool], delta: f64, target: OrthantTarget) -> Result<Option<Vec<f64>>> {
    let n = v.ambient_dim();
    let k = v.dim();
    let active: Vec<usize> = (0..n).filter(|i| mask[*i]).collect();
    let with_tau = matches!(target, OrthantTarget::UnitMargin);
    let cols = k + active.len() + usize::from(with_tau);
    let basis = v.basis();
    let mut a = RealMatrix::zeros(n + 1, cols);
    let mut b = vec![0.0; n + 1];
    let mut slot = 0;
    for i in 0..n {
        for j in 0..k {
            a[(i, j)] = if mask[i] { -basis[(i, j)] } else { basis[(i, j)] };
        }
        if mask[i] {
            a[(i, k + slot)] = 1.0;
            slot += 1;
            if with_tau {
                a[(i, cols - 1)] = 1.0;
            } else {
                b[i] = delta;
            }
        }
    }
    match target {
        OrthantTarget::Normalized => {
            for j in 0..k {
                a[(n, j)] = active.iter().map(|&i| basis[(i, j)]).sum();
            }
        }
        OrthantTarget::UnitMargin => a[(n, cols - 1)] = 1.0,
    }
    b[n] = 1.0;
    let mut nonneg = vec![true; cols];
    nonneg[..k].iter_mut().for_each(|f| *f = false);
    Ok(match lp_feasible(&a, &b, &nonneg)? {
        LpOutcome::Feasible(x) => Some(v.combine(&x[..k])),
        LpOutcome::Infeasible { .. } => None,
    })
}

const GRID_2D: usize = 7200;
const GRID_3D_POLAR: usize = 180;
const GRID_3D_AZIMUTH: usize = 360;

/// Maximizes `x_n − ‖head(x)‖` over unit vectors `x` of `V` (dim ≤ 3):
/// dense angular grid followed by local pattern refinement.
fn ice_cream_search(v: &Subspace) -> Result<(f64, Vec<f64>)> {
    let basis = v.basis();
    let eval = |c: &[f64]| -> (f64, Vec<f64>) {
        let x = basis.matvec(c);
        (ice_cream_margin(&x), x)
    };
    match v.dim() {
        1 => {
            let (fp, xp) = eval(&[1.0]);
            let (fm, xm) = eval(&[-1.0]);
            Ok(if fp >= fm { (fp, xp) } else { (fm, xm) })
        }
        2 => {
            let point = |t: f64| [libm::cos(t), libm::sin(t)];
            let mut best_t = 0.0;
            let mut best = f64::NEG_INFINITY;
            for i in 0..GRID_2D {
                let t = 2.0 * PI * i as f64 / GRID_2D as f64;
                let f = eval(&point(t)).0;
                if f > best {
                    best = f;
                    best_t = t;
                }
            }
            let mut step = 2.0 * PI / GRID_2D as f64;
            while step > 1e-15 {
                let mut moved = false;
                for t in [best_t - step, best_t + step] {
                    let f = eval(&point(t)).0;
                    if f > best {
                        best = f;
                        best_t = t;
                        moved = true;
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
            Ok(eval(&point(best_t)))
        }
        3 => {
            let point = |th: f64, ph: f64| [libm::sin(th) * libm::cos(ph), libm::sin(th) * libm::sin(ph), libm::cos(th)];
            let (mut bt, mut bp, mut best) = (0.0, 0.0, f64::NEG_INFINITY);
            for i in 0..=GRID_3D_POLAR {
                let th = PI * i as f64 / GRID_3D_POLAR as f64;
                for j in 0..GRID_3D_AZIMUTH {
                    let ph = 2.0 * PI * j as f64 / GRID_3D_AZIMUTH as f64;
                    let f = eval(&point(th, ph)).0;
                    if f > best {
                        best = f;
                        bt = th;
                        bp = ph;
                    }
                }
            }
            let mut step = PI / GRID_3D_POLAR as f64;
            while step > 1e-14 {
                let mut moved = false;
                for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                    let f = eval(&point(bt + dt, bp + dp)).0;
                    if f > best {
                        best = f;
                        bt += dt;
                        bp += dp;
                        moved = true;
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
            Ok(eval(&point(bt, bp)))
        }
        d => Err(Error::UnsupportedCone(alloc::format!("ice-cream search needs subspace dim ≤ 3, got {d}"))),
    }
}
