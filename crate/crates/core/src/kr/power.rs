//! Principal eigenpair by inverse iteration on a shifted resolvent.

use alloc::vec::Vec;

use crate::linalg::lu::LuFactors;
use crate::matrix::{dot, fix_sign, norm2, normalize};
use crate::spectral::OperatorModel;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration {
    /// `s = λ − 1/ρ`.
    pub eigenvalue: f64,
    /// Unit vector with positive largest-magnitude entry.
    pub eigenvector: Vec<f64>,
    pub iterations: usize,
    /// Converged Rayleigh quotient `ρ` of `R_λ(A)`.
    pub rayleigh: f64,
}

/// Iterates `x ← R_λ(A)x / ‖R_λ(A)x‖`. Stops once consecutive Rayleigh
/// quotients agree to `tol` relative and the residual `‖Rx − ρx‖` is below
/// `100·tol·|ρ|`; the residual test guards against early stops on slowly
/// rotating iterates of nonsymmetric operators.
pub fn inverse_power_iteration(
    op: &OperatorModel,
    lambda: f64,
    x0: &[f64],
    tol: f64,
    maxit: usize,
) -> Result<PowerIteration> {
    let n = op.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x0.len() });
    }
    if !(tol > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument("tolerance must be positive and lambda finite".into()));
    }
    let lu = LuFactors::factor(&op.matrix().scale(-1.0).shift_diagonal(lambda))
        .map_err(|_| Error::SingularResolvent { lambda })?;
    let mut x = x0.to_vec();
    if normalize(&mut x) == 0.0 {
        return Err(Error::InvalidArgument("starting vector is zero".into()));
    }
    let mut rho_prev = f64::NAN;
    for it in 1..=maxit {
        let y = lu.solve(&x);
        let rho = dot(&x, &y);
        let residual = norm2(&y.iter().zip(&x).map(|(a, b)| a - rho * b).collect::<Vec<_>>());
        let settled = (rho - rho_prev).abs() <= tol * rho.abs() && residual <= 100.0 * tol * rho.abs();
        if settled && rho != 0.0 {
            fix_sign(&mut x);
            return Ok(PowerIteration { eigenvalue: lambda - 1.0 / rho, eigenvector: x, iterations: it, rayleigh: rho });
        }
        rho_prev = rho;
        x = y;
        if normalize(&mut x) == 0.0 || !x.iter().all(|v| v.is_finite()) {
            return Err(Error::PowerIterationStalled { iterations: it });
        }
    }
    Err(Error::NoConvergence { iterations: maxit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RealMatrix;

    #[test]
    fn diagonal_decay() {
        let op = OperatorModel::new(RealMatrix::from_diagonal(&[-1.0, -4.0])).unwrap();
        let p = inverse_power_iteration(&op, 1.0, &[1.0, 1.0], 1e-13, 500).unwrap();
        assert!((p.eigenvalue + 1.0).abs() < 1e-10);
        assert!((p.eigenvector[0] - 1.0).abs() < 1e-10 && p.eigenvector[1].abs() < 1e-6);
    }

    #[test]
    fn symmetric_two_by_two() {
        let op = OperatorModel::new(RealMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap()).unwrap();
        let p = inverse_power_iteration(&op, 5.0, &[1.0, 0.0], 1e-13, 500).unwrap();
        assert!((p.eigenvalue - 3.0).abs() < 1e-10);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((p.eigenvector[0] - h).abs() < 1e-8 && (p.eigenvector[1] - h).abs() < 1e-8);
    }

    #[test]
    fn errors() {
        let op = OperatorModel::new(RealMatrix::from_diagonal(&[1.0, 2.0])).unwrap();
        assert!(matches!(inverse_power_iteration(&op, 1.0, &[1.0, 1.0], 1e-12, 10), Err(Error::SingularResolvent { .. })));
        assert!(matches!(inverse_power_iteration(&op, 5.0, &[0.0, 0.0], 1e-12, 10), Err(Error::InvalidArgument(_))));
        let rot = OperatorModel::new(RealMatrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap()).unwrap();
        assert!(matches!(
            inverse_power_iteration(&rot, 1.0, &[1.0, 0.0], 1e-12, 50),
            Err(Error::NoConvergence { iterations: 50 })
        ));
    }
}
