//! Monotone finite-difference discretization of
//! `L u = −Σ a_ij ∂_i∂_j u + Σ b_i ∂_i u + c u` on intervals and rectangles
//! with boundary condition `α u + β ∂u/∂ν = 0`, where `β` may vanish on some
//! sides (Dirichlet there) and `α` on others.
//!
//! The assembled matrix is `A = −L_h` on the unknown nodes. Sides with
//! `β = 0` are vertex-centred and their boundary nodes are eliminated; sides
//! with `β > 0` are cell-centred and closed with a mirrored ghost node.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::kr::KrCheck;
use crate::{Error, Result};

mod analysis;
mod assemble;

pub use analysis::{
    closed_form_principal, comparison_check, elliptic_report, principal_eigenpair, resolvent_positivity_scan,
    semigroup_positivity_check, DenseComparison, EllipticPrincipal, ELLIPTIC_THEOREM, MAX_DENSE_UNKNOWNS,
};
pub use assemble::{assemble, disjoint_union, DiscreteOperator};

/// Upper limit on unknowns for any assembled operator.
pub const MAX_UNKNOWNS: usize = 4096;

/// Axis-aligned interval or rectangle with interior node counts per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshSpec {
    pub dimension: usize,
    pub lower: [f64; 2],
    pub upper: [f64; 2],
    pub counts: [usize; 2],
}

impl MeshSpec {
    pub fn interval(lo: f64, hi: f64, n: usize) -> Result<Self> {
        let m = Self { dimension: 1, lower: [lo, 0.0], upper: [hi, 0.0], counts: [n, 1] };
        m.check()?;
        Ok(m)
    }

    pub fn rectangle(lower: [f64; 2], upper: [f64; 2], counts: [usize; 2]) -> Result<Self> {
        let m = Self { dimension: 2, lower, upper, counts };
        m.check()?;
        Ok(m)
    }

    pub fn unit_square(nx: usize, ny: usize) -> Result<Self> {
        Self::rectangle([0.0, 0.0], [1.0, 1.0], [nx, ny])
    }

    pub fn unknowns(&self) -> usize {
        self.counts[0] * self.counts[1]
    }

    pub fn length(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    fn check(&self) -> Result<()> {
        if self.dimension != 1 && self.dimension != 2 {
            return Err(Error::InvalidMesh(format!("dimension {} (expected 1 or 2)", self.dimension)));
        }
        for axis in 0..self.dimension {
            if self.counts[axis] < 3 {
                return Err(Error::InvalidMesh(format!("axis {axis} has {} nodes (need at least 3)", self.counts[axis])));
            }
            let (lo, hi) = (self.lower[axis], self.upper[axis]);
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(Error::InvalidMesh(format!("axis {axis} bounds [{lo}, {hi}]")));
            }
        }
        if self.unknowns() > MAX_UNKNOWNS {
            return Err(Error::InvalidMesh(format!("{} unknowns exceed {MAX_UNKNOWNS}", self.unknowns())));
        }
        Ok(())
    }
}

/// Scalar coefficient: a closed-form built-in or one value per unknown node.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarField {
    Constant(f64),
    /// `value + gradient · x`
    Linear { value: f64, gradient: [f64; 2] },
    /// `offset + amplitude · sin(wavenumber · x + phase)`
    Sinusoidal { offset: f64, amplitude: f64, wavenumber: [f64; 2], phase: f64 },
    /// Values in unknown order (`j·nx + i`).
    Grid(Vec<f64>),
}

impl ScalarField {
    pub fn eval(&self, index: usize, x: [f64; 2]) -> f64 {
        match self {
            Self::Constant(v) => *v,
            Self::Linear { value, gradient } => value + gradient[0] * x[0] + gradient[1] * x[1],
            Self::Sinusoidal { offset, amplitude, wavenumber, phase } => {
                offset + amplitude * libm::sin(wavenumber[0] * x[0] + wavenumber[1] * x[1] + phase)
            }
            Self::Grid(v) => v[index],
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Constant(v) if *v == 0.0)
    }

    fn check_len(&self, name: &str, n: usize) -> Result<()> {
        match self {
            Self::Grid(v) if v.len() != n => {
                Err(Error::InvalidCoefficients(format!("{name}: grid has {} values, mesh has {n} nodes", v.len())))
            }
            _ => Ok(()),
        }
    }
}

/// Coefficients of `L`. The diffusion matrix is stored by its upper
/// triangle, so `a_21 = a_12` holds by construction. One-dimensional meshes
/// use `a11`, `b1` and `c` only.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub a11: ScalarField,
    pub a12: ScalarField,
    pub a22: ScalarField,
    pub b1: ScalarField,
    pub b2: ScalarField,
    pub c: ScalarField,
}

impl CoefficientSet {
    /// `L = −Δ`.
    pub fn laplacian() -> Self {
        Self {
            a11: ScalarField::Constant(1.0),
            a12: ScalarField::Constant(0.0),
            a22: ScalarField::Constant(1.0),
            b1: ScalarField::Constant(0.0),
            b2: ScalarField::Constant(0.0),
            c: ScalarField::Constant(0.0),
        }
    }

    pub fn with_diffusion(mut self, a11: ScalarField, a12: ScalarField, a22: ScalarField) -> Self {
        self.a11 = a11;
        self.a12 = a12;
        self.a22 = a22;
        self
    }

    pub fn with_drift(mut self, b1: ScalarField, b2: ScalarField) -> Self {
        self.b1 = b1;
        self.b2 = b2;
        self
    }

    pub fn with_reaction(mut self, c: ScalarField) -> Self {
        self.c = c;
        self
    }

    pub fn has_grid_values(&self) -> bool {
        [&self.a11, &self.a12, &self.a22, &self.b1, &self.b2, &self.c].iter().any(|f| matches!(f, ScalarField::Grid(_)))
    }

    fn fields(&self) -> [(&'static str, &ScalarField); 6] {
        [("a11", &self.a11), ("a12", &self.a12), ("a22", &self.a22), ("b1", &self.b1), ("b2", &self.b2), ("c", &self.c)]
    }
}

/// Boundary coefficients along one side: a single value or one per node
/// along the side.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl BoundaryCondition {
    pub fn robin(alpha: f64, beta: f64) -> Self {
        Self { alpha: vec![alpha], beta: vec![beta] }
    }

    pub fn dirichlet() -> Self {
        Self::robin(1.0, 0.0)
    }

    pub fn neumann() -> Self {
        Self::robin(0.0, 1.0)
    }

    pub fn nodes(alpha: Vec<f64>, beta: Vec<f64>) -> Self {
        Self { alpha, beta }
    }

    fn value(v: &[f64], pos: usize) -> f64 {
        if v.len() == 1 {
            v[0]
        } else {
            v[pos]
        }
    }

    pub fn alpha_at(&self, pos: usize) -> f64 {
        Self::value(&self.alpha, pos)
    }

    pub fn beta_at(&self, pos: usize) -> f64 {
        Self::value(&self.beta, pos)
    }

    /// Side closed by a ghost node rather than eliminated.
    pub fn is_cell_centred(&self) -> bool {
        self.beta.iter().any(|b| *b > 0.0)
    }

    /// Mirror factor `u_ghost = g·u_inner` at position `pos` for spacing `h`.
    pub fn ghost_factor(&self, pos: usize, h: f64) -> f64 {
        let (a, b) = (self.alpha_at(pos), self.beta_at(pos));
        (2.0 * b - a * h) / (2.0 * b + a * h)
    }

    pub fn is_dirichlet(&self) -> bool {
        self.beta.iter().all(|b| *b == 0.0)
    }

    pub fn is_neumann(&self) -> bool {
        self.alpha.iter().all(|a| *a == 0.0) && self.beta.iter().all(|b| *b > 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

    pub fn name(self) -> &'static str {
        match self {
            Self::Left => "left",
            Self::Right => "right",
            Self::Bottom => "bottom",
            Self::Top => "top",
        }
    }
}

/// Conditions on left, right, bottom and top. Intervals use left and right.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpec {
    pub sides: [BoundaryCondition; 4],
}

impl BoundarySpec {
    pub fn uniform(bc: BoundaryCondition) -> Self {
        Self { sides: [bc.clone(), bc.clone(), bc.clone(), bc] }
    }

    pub fn dirichlet() -> Self {
        Self::uniform(BoundaryCondition::dirichlet())
    }

    pub fn interval(left: BoundaryCondition, right: BoundaryCondition) -> Self {
        Self { sides: [left, right, BoundaryCondition::dirichlet(), BoundaryCondition::dirichlet()] }
    }

    pub fn rectangle(left: BoundaryCondition, right: BoundaryCondition, bottom: BoundaryCondition, top: BoundaryCondition) -> Self {
        Self { sides: [left, right, bottom, top] }
    }

    pub fn side(&self, side: Side) -> &BoundaryCondition {
        &self.sides[side as usize]
    }
}

fn node_label(mesh: &MeshSpec, idx: usize) -> String {
    let nx = mesh.counts[0];
    if mesh.dimension == 1 {
        format!("node {idx}")
    } else {
        format!("node {idx} (i={}, j={})", idx % nx, idx / nx)
    }
}

/// Node coordinates given the spacing rule of each side.
pub(crate) struct Layout {
    pub h: [f64; 2],
    pub first: [f64; 2],
}

impl Layout {
    pub fn new(mesh: &MeshSpec, bc: &BoundarySpec) -> Self {
        let mut h = [1.0; 2];
        let mut first = [mesh.lower[0], mesh.lower[1]];
        for axis in 0..mesh.dimension {
            let (lo, hi) = if axis == 0 { (Side::Left, Side::Right) } else { (Side::Bottom, Side::Top) };
            let lo_cell = bc.side(lo).is_cell_centred();
            let hi_cell = bc.side(hi).is_cell_centred();
            let n = mesh.counts[axis] as f64;
            let half = |b: bool| if b { 0.5 } else { 0.0 };
            h[axis] = mesh.length(axis) / (n + 1.0 - half(lo_cell) - half(hi_cell));
            first[axis] = mesh.lower[axis] + h[axis] * (1.0 - half(lo_cell));
        }
        Self { h, first }
    }

    pub fn point(&self, mesh: &MeshSpec, idx: usize) -> [f64; 2] {
        let nx = mesh.counts[0];
        let (i, j) = (idx % nx, idx / nx);
        let y = if mesh.dimension == 2 { self.first[1] + j as f64 * self.h[1] } else { 0.0 };
        [self.first[0] + i as f64 * self.h[0], y]
    }
}

/// Checks symmetry and uniform ellipticity of the diffusion matrix,
/// `c ≥ 0`, `α, β ≥ 0` with `α + β > 0` at every boundary node, and that
/// each side is either entirely Dirichlet or entirely closed by ghosts. A pass
/// records the ellipticity constant `θ`.
pub fn validate(coeffs: &CoefficientSet, bc: &BoundarySpec, mesh: &MeshSpec) -> KrCheck {
    let name = "hyp:elliptic-coefficients";
    let n = mesh.unknowns();
    for (field, f) in coeffs.fields() {
        if let Err(e) = f.check_len(field, n) {
            return KrCheck::fail(name, &format!("{e}")).with_tol("nodes", n as f64);
        }
    }
    let layout = Layout::new(mesh, bc);
    let mut theta = f64::INFINITY;
    for idx in 0..n {
        let x = layout.point(mesh, idx);
        let [a11, a12, a22, b1, b2, c] = coeffs.fields().map(|(_, f)| f.eval(idx, x));
        if ![a11, a12, a22, b1, b2, c].iter().all(|v| v.is_finite()) {
            return KrCheck::fail(name, &format!("non-finite coefficient at {}", node_label(mesh, idx)))
                .with_tol("node", idx as f64);
        }
        let smallest = if mesh.dimension == 1 {
            a11
        } else {
            let mean = 0.5 * (a11 + a22);
            let rad = libm::hypot(0.5 * (a11 - a22), a12);
            mean - rad
        };
        if !(smallest > 0.0) {
            return KrCheck::fail(name, &format!("diffusion not uniformly elliptic at {}", node_label(mesh, idx)))
                .with_tol("node", idx as f64)
                .with_tol("smallest_eigenvalue", smallest);
        }
        theta = theta.min(smallest);
        if c < 0.0 {
            return KrCheck::fail(name, &format!("c < 0 at {}", node_label(mesh, idx)))
                .with_tol("node", idx as f64)
                .with_tol("c", c);
        }
    }
    let sides: &[Side] = if mesh.dimension == 1 { &[Side::Left, Side::Right] } else { &Side::ALL };
    for &side in sides {
        let cond = bc.side(side);
        let along = match (mesh.dimension, side) {
            (1, _) => 1,
            (_, Side::Left | Side::Right) => mesh.counts[1],
            _ => mesh.counts[0],
        };
        for (label, v) in [("alpha", &cond.alpha), ("beta", &cond.beta)] {
            if v.len() != 1 && v.len() != along {
                return KrCheck::fail(name, &format!("{} side: {label} has {} values, side has {along} nodes", side.name(), v.len()))
                    .with_tol("values", v.len() as f64);
            }
        }
        for pos in 0..along {
            let (a, b) = (cond.alpha_at(pos), cond.beta_at(pos));
            if !(a >= 0.0 && b >= 0.0 && a + b > 0.0 && a.is_finite() && b.is_finite()) {
                return KrCheck::fail(name, &format!("{} side node {pos}: alpha = {a}, beta = {b}", side.name()))
                    .with_tol("boundary_node", pos as f64)
                    .with_tol("alpha", a)
                    .with_tol("beta", b);
            }
        }
        if cond.is_cell_centred() && cond.beta.contains(&0.0) {
            return KrCheck::fail(
                name,
                &format!("{} side mixes beta = 0 and beta > 0; split the degenerate set along sides", side.name()),
            )
            .with_tol("beta_min", cond.beta.iter().copied().fold(f64::INFINITY, f64::min));
        }
    }
    KrCheck::pass(name, &format!("symmetric diffusion, theta = {theta:.12e}, c >= 0, alpha + beta > 0 on the boundary"))
        .with_tol("theta", theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kr::Status;

    #[test]
    fn validation_examples() {
        let mesh1 = MeshSpec::interval(0.0, 1.0, 10).unwrap();
        let c = validate(&CoefficientSet::laplacian(), &BoundarySpec::dirichlet(), &mesh1);
        assert_eq!(c.status, Status::Pass);
        assert_eq!(c.tolerances["theta"], 1.0);

        let mesh2 = MeshSpec::unit_square(5, 5).unwrap();
        let k = ScalarField::Constant;
        let coeffs = CoefficientSet::laplacian().with_diffusion(k(1.0), k(0.99), k(1.0));
        let c = validate(&coeffs, &BoundarySpec::dirichlet(), &mesh2);
        assert_eq!(c.status, Status::Pass);
        assert!((c.tolerances["theta"] - 0.01).abs() < 1e-14);

        let bad = BoundarySpec::interval(BoundaryCondition::robin(0.0, 0.0), BoundaryCondition::dirichlet());
        let c = validate(&CoefficientSet::laplacian(), &bad, &mesh1);
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.tolerances["boundary_node"], 0.0);
        assert!(c.detail.contains("left"));
    }

    #[test]
    fn rejects_bad_meshes() {
        assert!(MeshSpec::interval(0.0, 1.0, 2).is_err());
        assert!(MeshSpec::interval(1.0, 0.0, 5).is_err());
        assert!(MeshSpec::unit_square(65, 65).is_err());
    }

    #[test]
    fn spacing_follows_side_type() {
        let mesh = MeshSpec::interval(0.0, 1.0, 4).unwrap();
        let dd = Layout::new(&mesh, &BoundarySpec::dirichlet());
        assert!((dd.h[0] - 0.2).abs() < 1e-15 && (dd.first[0] - 0.2).abs() < 1e-15);
        let dn = Layout::new(&mesh, &BoundarySpec::interval(BoundaryCondition::dirichlet(), BoundaryCondition::neumann()));
        assert!((dn.h[0] - 1.0 / 4.5).abs() < 1e-15);
        let nn = Layout::new(&mesh, &BoundarySpec::uniform(BoundaryCondition::neumann()));
        assert!((nn.h[0] - 0.25).abs() < 1e-15 && (nn.first[0] - 0.125).abs() < 1e-15);
    }
}
