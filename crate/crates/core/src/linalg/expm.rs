//! Matrix exponential by scaling and squaring.
//!
//! The diagonal is first shifted so the working matrix `C = A + βI` has a
//! nonnegative diagonal, and `e^{tA/2^s} = e^{-tβ/2^s} · e^{tC/2^s}` is formed
//! from a Taylor polynomial (Paterson–Stockmeyer evaluation) before `s`
//! squarings. For essentially nonnegative `A` every intermediate is then
//! entrywise nonnegative, so tiny positive entries of `e^{tA}` come out with
//! full relative accuracy instead of drowning in cancellation.

use alloc::format;
use alloc::vec::Vec;

use crate::matrix::RealMatrix;
use crate::{Error, Result};

/// Largest accepted `‖tA‖₁`.
pub const MAX_SCALED_NORM: f64 = 1e6;

/// Largest accepted `t · μ∞(A)`, where `μ∞` is the ∞-norm logarithmic norm
/// (Gershgorin upper bound). Beyond it `e^{tA}` may overflow.
pub const MAX_LOG_GROWTH: f64 = 700.0;

/// Target norm of the scaled matrix.
const THETA: f64 = 1.0;
/// Paterson–Stockmeyer block size and block count: degree `P*Q - 1`.
const P: usize = 5;
const Q: usize = 4;

pub fn matrix_exp(a: &RealMatrix, t: f64) -> Result<RealMatrix> {
    let n = a.ensure_square()?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("matrix_exp needs finite t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(RealMatrix::identity(n));
    }
    let norm = t * a.norm_one();
    if norm > MAX_SCALED_NORM {
        return Err(Error::OverflowRisk(format!("‖tA‖₁ = {norm:e} exceeds {MAX_SCALED_NORM:e}")));
    }
    let growth = t * a.gershgorin_upper();
    if growth > MAX_LOG_GROWTH {
        return Err(Error::OverflowRisk(format!("t·μ∞(A) = {growth:e} exceeds {MAX_LOG_GROWTH}")));
    }

    let beta = a.diagonal().iter().fold(0.0_f64, |m, d| m.max(-d));
    let c = a.shift_diagonal(beta);
    let cnorm = t * c.norm_one();
    let mut s = 0i32;
    while cnorm / libm::ldexp(1.0, s) > THETA {
        s += 1;
    }
    let tau = t / libm::ldexp(1.0, s);
    let b = c.scale(tau);
    let mut e = taylor_ps(&b).scale(libm::exp(-beta * tau));
    for _ in 0..s {
        e = e.matmul(&e);
    }
    Ok(e)
}

/// `Σ_{k < P·Q} B^k / k!` via Paterson–Stockmeyer.
fn taylor_ps(b: &RealMatrix) -> RealMatrix {
    let n = b.rows();
    let mut coef = [0.0; P * Q];
    coef[0] = 1.0;
    for k in 1..P * Q {
        coef[k] = coef[k - 1] / k as f64;
    }
    let mut powers: Vec<RealMatrix> = Vec::with_capacity(P + 1);
    powers.push(RealMatrix::identity(n));
    powers.push(b.clone());
    for k in 2..=P {
        let next = powers[k - 1].matmul(b);
        powers.push(next);
    }
    let block = |j: usize| -> RealMatrix {
        let mut acc = RealMatrix::zeros(n, n);
        for i in 0..P {
            let c = coef[j * P + i];
            for (x, y) in acc.as_mut_slice().iter_mut().zip(powers[i].as_slice()) {
                *x += c * y;
            }
        }
        acc
    };
    let mut acc = block(Q - 1);
    for j in (0..Q - 1).rev() {
        acc = acc.matmul(&powers[P]).add(&block(j));
    }
    acc
}
