//! Stencil assembly of `A = −L_h`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{validate, BoundarySpec, CoefficientSet, Layout, MeshSpec, Side};
use crate::cone::Cone;
use crate::matrix::RealMatrix;
use crate::spectral::OperatorModel;
use crate::{Error, Result};

/// Assembled operator with its grid metadata. Unknown `j·nx + i` sits at
/// `nodes[j·nx + i]`; eliminated Dirichlet nodes have no index.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub model: OperatorModel,
    pub mesh: MeshSpec,
    pub bc: BoundarySpec,
    pub cone: Cone,
    pub nodes: Vec<[f64; 2]>,
    pub h: [f64; 2],
    pub theta: f64,
    /// Off-diagonal pattern is strongly connected.
    pub irreducible: bool,
    /// Some coefficient was given by node values rather than a formula.
    pub grid_coefficients: bool,
}

impl DiscreteOperator {
    pub fn matrix(&self) -> &RealMatrix {
        self.model.matrix()
    }

    pub fn unknowns(&self) -> usize {
        self.nodes.len()
    }
}

struct Stencil<'a> {
    mesh: &'a MeshSpec,
    bc: &'a BoundarySpec,
    h: [f64; 2],
    nx: isize,
    ny: isize,
}

impl Stencil<'_> {
    /// Maps a possibly off-grid neighbour to an unknown and a factor;
    /// `None` for Dirichlet boundary values.
    fn resolve(&self, mut i: isize, mut j: isize) -> Option<(usize, f64)> {
        let mut w = 1.0;
        for axis in 0..self.mesh.dimension {
            let (k, n, lo, hi, h) = if axis == 0 {
                (&mut i, self.nx, Side::Left, Side::Right, self.h[0])
            } else {
                (&mut j, self.ny, Side::Bottom, Side::Top, self.h[1])
            };
            let side = if *k < 0 {
                lo
            } else if *k >= n {
                hi
            } else {
                continue;
            };
            let cond = self.bc.side(side);
            if cond.is_dirichlet() {
                return None;
            }
            *k = if *k < 0 { 0 } else { n - 1 };
            let pos = if self.mesh.dimension == 1 {
                0
            } else if axis == 0 {
                j.clamp(0, self.ny - 1) as usize
            } else {
                i.clamp(0, self.nx - 1) as usize
            };
            w *= cond.ghost_factor(pos, h);
        }
        Some(((j * self.nx + i) as usize, w))
    }
}

/// Central differences for second derivatives, the 7-point splitting for the
/// mixed derivative, upwinding for the drift and ghost elimination on
/// cell-centred sides. Errors when the stencil would lose nonnegative
/// off-diagonals.
pub fn assemble(mesh: &MeshSpec, coeffs: &CoefficientSet, bc: &BoundarySpec) -> Result<DiscreteOperator> {
    mesh.check()?;
    let v = validate(coeffs, bc, mesh);
    if !v.is_pass() {
        return Err(Error::InvalidCoefficients(v.detail));
    }
    let theta = v.tolerances["theta"];
    let layout = Layout::new(mesh, bc);
    let n = mesh.unknowns();
    let (nx, ny) = (mesh.counts[0], mesh.counts[1]);
    let [hx, hy] = layout.h;
    let st = Stencil { mesh, bc, h: layout.h, nx: nx as isize, ny: ny as isize };
    let mut a = RealMatrix::zeros(n, n);
    let nodes: Vec<[f64; 2]> = (0..n).map(|p| layout.point(mesh, p)).collect();
    for p in 0..n {
        let x = nodes[p];
        let (i, j) = ((p % nx) as isize, (p / nx) as isize);
        let a11 = coeffs.a11.eval(p, x);
        let b1 = coeffs.b1.eval(p, x);
        let c = coeffs.c.eval(p, x);
        let mut diag = -c;
        let mut links: Vec<(isize, isize, f64)> = Vec::with_capacity(8);
        let ax = a11 / (hx * hx);
        if mesh.dimension == 1 {
            links.push((i - 1, j, ax + b1.max(0.0) / hx));
            links.push((i + 1, j, ax + (-b1).max(0.0) / hx));
            diag -= 2.0 * ax + b1.abs() / hx;
        } else {
            let a12 = coeffs.a12.eval(p, x);
            let a22 = coeffs.a22.eval(p, x);
            let b2 = coeffs.b2.eval(p, x);
            let ay = a22 / (hy * hy);
            let cross = a12.abs() / (hx * hy);
            let ew = ax - cross;
            let ns = ay - cross;
            if ew < 0.0 || ns < 0.0 {
                return Err(Error::MonotonicityViolated(format!(
                    "mixed derivative too strong at node {p}: |a12|/(hx hy) = {cross:e} exceeds a11/hx^2 = {ax:e} or a22/hy^2 = {ay:e}; refine the mesh"
                )));
            }
            links.push((i - 1, j, ew + b1.max(0.0) / hx));
            links.push((i + 1, j, ew + (-b1).max(0.0) / hx));
            links.push((i, j - 1, ns + b2.max(0.0) / hy));
            links.push((i, j + 1, ns + (-b2).max(0.0) / hy));
            if a12 > 0.0 {
                links.push((i + 1, j + 1, cross));
                links.push((i - 1, j - 1, cross));
            } else if a12 < 0.0 {
                links.push((i - 1, j + 1, cross));
                links.push((i + 1, j - 1, cross));
            }
            diag -= 2.0 * ax + 2.0 * ay - 2.0 * cross + b1.abs() / hx + b2.abs() / hy;
        }
        a[(p, p)] += diag;
        for (ii, jj, w) in links {
            if let Some((q, g)) = st.resolve(ii, jj) {
                a[(p, q)] += w * g;
            }
        }
    }
    check_monotone(&a)?;
    let irreducible = strongly_connected(&a);
    let model = OperatorModel::new(a)?;
    Ok(DiscreteOperator {
        model,
        mesh: mesh.clone(),
        bc: bc.clone(),
        cone: Cone::GridFunction(vec![true; n]),
        nodes,
        h: layout.h,
        theta,
        irreducible,
        grid_coefficients: coeffs.has_grid_values(),
    })
}

fn check_monotone(a: &RealMatrix) -> Result<()> {
    let n = a.rows();
    for p in 0..n {
        let row = a.row(p);
        let scale = row.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let mut sum = 0.0;
        for (q, &v) in row.iter().enumerate() {
            if q != p && v < 0.0 {
                return Err(Error::MonotonicityViolated(format!(
                    "negative off-diagonal {v:e} at ({p},{q}); a ghost factor turned negative, refine the mesh"
                )));
            }
            sum += v;
        }
        if sum > 1e-12 * scale {
            return Err(Error::MonotonicityViolated(format!("row {p} has positive sum {sum:e}")));
        }
    }
    Ok(())
}

fn reach(a: &RealMatrix, forward: bool) -> usize {
    let n = a.rows();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(p) = stack.pop() {
        for q in 0..n {
            let w = if forward { a[(p, q)] } else { a[(q, p)] };
            if q != p && w > 0.0 && !seen[q] {
                seen[q] = true;
                count += 1;
                stack.push(q);
            }
        }
    }
    count
}

fn strongly_connected(a: &RealMatrix) -> bool {
    a.rows() == 0 || (reach(a, true) == a.rows() && reach(a, false) == a.rows())
}

/// Block-diagonal operator of two independent problems, e.g. two disjoint
/// intervals. Grid metadata is that of `first`; the nodes of `second` follow.
pub fn disjoint_union(first: &DiscreteOperator, second: &DiscreteOperator) -> Result<DiscreteOperator> {
    let a = first.matrix().block_diagonal(second.matrix());
    let n = a.rows();
    let mut nodes = first.nodes.clone();
    nodes.extend_from_slice(&second.nodes);
    Ok(DiscreteOperator {
        model: OperatorModel::new(a)?,
        mesh: first.mesh.clone(),
        bc: first.bc.clone(),
        cone: Cone::GridFunction(vec![true; n]),
        nodes,
        h: first.h,
        theta: first.theta.min(second.theta),
        irreducible: false,
        grid_coefficients: first.grid_coefficients || second.grid_coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{BoundaryCondition, ScalarField};

    fn row(a: &RealMatrix, p: usize) -> Vec<f64> {
        a.row(p).to_vec()
    }

    #[test]
    fn textbook_three_point_stencil() {
        let mesh = MeshSpec::interval(0.0, 4.0, 3).unwrap();
        let op = assemble(&mesh, &CoefficientSet::laplacian(), &BoundarySpec::dirichlet()).unwrap();
        let expect = RealMatrix::from_rows(&[[-2.0, 1.0, 0.0], [1.0, -2.0, 1.0], [0.0, 1.0, -2.0]]).unwrap();
        assert_eq!(op.matrix(), &expect);
        assert_eq!(op.nodes.iter().map(|x| x[0]).collect::<Vec<_>>(), [1.0, 2.0, 3.0]);
        assert!(op.irreducible);
    }

    #[test]
    fn upwind_drift() {
        let mesh = MeshSpec::interval(0.0, 4.0, 3).unwrap();
        let coeffs = CoefficientSet::laplacian().with_drift(ScalarField::Constant(2.0), ScalarField::Constant(0.0));
        let op = assemble(&mesh, &coeffs, &BoundarySpec::dirichlet()).unwrap();
        assert_eq!(row(op.matrix(), 1), [3.0, -4.0, 1.0]);
        let neg = CoefficientSet::laplacian().with_drift(ScalarField::Constant(-2.0), ScalarField::Constant(0.0));
        let op = assemble(&mesh, &neg, &BoundarySpec::dirichlet()).unwrap();
        assert_eq!(row(op.matrix(), 1), [1.0, -4.0, 3.0]);
    }

    #[test]
    fn neumann_ghost_row() {
        // h = 1 with the right side cell-centred: boundary at 3.5
        let mesh = MeshSpec::interval(0.0, 3.5, 3).unwrap();
        let bc = BoundarySpec::interval(BoundaryCondition::dirichlet(), BoundaryCondition::neumann());
        let op = assemble(&mesh, &CoefficientSet::laplacian(), &bc).unwrap();
        assert_eq!(op.h[0], 1.0);
        assert_eq!(row(op.matrix(), 2), [0.0, 1.0, -1.0]);
    }

    #[test]
    fn robin_ghost_factor() {
        let mesh = MeshSpec::interval(0.0, 3.5, 3).unwrap();
        let bc = BoundarySpec::interval(BoundaryCondition::dirichlet(), BoundaryCondition::robin(1.0, 1.0));
        let op = assemble(&mesh, &CoefficientSet::laplacian(), &bc).unwrap();
        // g = (2 - 1)/(2 + 1)
        assert!((op.matrix()[(2, 2)] - (-2.0 + 1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn mixed_derivative_splitting() {
        let mesh = MeshSpec::unit_square(3, 3).unwrap();
        let k = ScalarField::Constant;
        let coeffs = CoefficientSet::laplacian().with_diffusion(k(1.0), k(0.5), k(1.0));
        let op = assemble(&mesh, &coeffs, &BoundarySpec::dirichlet()).unwrap();
        let a = op.matrix();
        // centre node 4, h = 1/4
        let (ax, cross) = (16.0, 0.5 * 16.0);
        assert_eq!(a[(4, 3)], ax - cross);
        assert_eq!(a[(4, 8)], cross);
        assert_eq!(a[(4, 0)], cross);
        assert_eq!(a[(4, 6)], 0.0);
        assert_eq!(a[(4, 4)], -4.0 * ax + 2.0 * cross);
        let strong = CoefficientSet::laplacian().with_diffusion(k(1.0), k(-1.5), k(3.0));
        assert!(matches!(assemble(&mesh, &strong, &BoundarySpec::dirichlet()), Err(Error::MonotonicityViolated(_))));
    }

    #[test]
    fn union_is_reducible() {
        let mesh = MeshSpec::interval(0.0, 1.0, 4).unwrap();
        let op = assemble(&mesh, &CoefficientSet::laplacian(), &BoundarySpec::dirichlet()).unwrap();
        let u = disjoint_union(&op, &op).unwrap();
        assert_eq!(u.unknowns(), 8);
        assert!(!u.irreducible);
        assert!(!strongly_connected(u.matrix()));
    }
}
