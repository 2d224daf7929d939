//! Phase-1 simplex for equality-constrained feasibility problems.
//!
//! Solves `A x = b` with a subset of variables constrained to be
//! nonnegative; the remaining ones are free and split as `x⁺ − x⁻`. Rows are
//! sign-normalized so `b ≥ 0`, and any column that is a positive multiple of
//! a unit vector seeds the starting basis, so artificial variables are only
//! added for rows that lack one. Bland's rule prevents cycling.

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::RealMatrix;
use crate::{Error, Result};

pub const MAX_PIVOTS: usize = 10_000;
/// Phase-1 objective above which the system is declared infeasible.
pub const INFEASIBLE_TOL: f64 = 1e-9;
/// Required `‖Ax − b‖∞` of a returned witness.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Reduced costs and pivot entries below this are treated as zero.
const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Feasible(Vec<f64>),
    Infeasible { phase1_optimum: f64 },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible(_))
    }
}

/// Column of the working tableau and the original variable it came from.
#[derive(Clone, Copy)]
enum Column {
    Plus(usize),
    Minus(usize),
    Artificial,
}

pub fn lp_feasible(a_eq: &RealMatrix, b_eq: &[f64], nonneg: &[bool]) -> Result<LpOutcome> {
    let (m, n) = (a_eq.rows(), a_eq.cols());
    if b_eq.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: b_eq.len() });
    }
    if nonneg.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: nonneg.len() });
    }

    let mut cols: Vec<Column> = Vec::new();
    for (j, nn) in nonneg.iter().enumerate() {
        cols.push(Column::Plus(j));
        if !nn {
            cols.push(Column::Minus(j));
        }
    }
    let structural = cols.len();

    // rows with sign normalized so that rhs >= 0
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = if b_eq[i] < 0.0 { -1.0 } else { 1.0 };
        let r = a_eq.row(i);
        rows.push(
            cols.iter()
                .map(|c| match c {
                    Column::Plus(j) => flip * r[*j],
                    Column::Minus(j) => -flip * r[*j],
                    Column::Artificial => 0.0,
                })
                .collect(),
        );
        rhs.push(flip * b_eq[i]);
    }

    // crash basis from unit columns
    let mut basis: Vec<Option<usize>> = vec![None; m];
    let mut nonzero_rows = vec![(0usize, 0usize); structural];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if *v != 0.0 {
                nonzero_rows[j].0 += 1;
                nonzero_rows[j].1 = i;
            }
        }
    }
    for (j, &(count, i)) in nonzero_rows.iter().enumerate() {
        if count != 1 || basis[i].is_some() {
            continue;
        }
        let v = rows[i][j];
        if v < 0.0 && rhs[i] != 0.0 {
            continue;
        }
        let scale = 1.0 / v;
        rows[i].iter_mut().for_each(|x| *x *= scale);
        rhs[i] *= scale;
        basis[i] = Some(j);
    }
    for i in 0..m {
        if basis[i].is_none() {
            let k = cols.len();
            cols.push(Column::Artificial);
            for (r, row) in rows.iter_mut().enumerate() {
                row.push(if r == i { 1.0 } else { 0.0 });
            }
            basis[i] = Some(k);
        }
    }
    let width = cols.len();
    let mut basis: Vec<usize> = basis.into_iter().map(|b| b.unwrap_or(0)).collect();
    let is_art: Vec<bool> = cols.iter().map(|c| matches!(c, Column::Artificial)).collect();

    // tableau rows: [row | rhs]; objective = sum of artificials, reduced costs
    let mut tab: Vec<Vec<f64>> = rows
        .into_iter()
        .zip(&rhs)
        .map(|(mut r, b)| {
            r.push(*b);
            r
        })
        .collect();
    let mut cost = vec![0.0; width + 1];
    for (i, &bj) in basis.iter().enumerate() {
        if is_art[bj] {
            for (c, t) in cost.iter_mut().zip(&tab[i]) {
                *c -= t;
            }
        }
    }
    for (j, c) in cost.iter_mut().enumerate().take(width) {
        if is_art[j] {
            *c = 0.0;
        }
    }

    let mut pivots = 0;
    loop {
        let entering = (0..width).find(|&j| !is_art[j] && cost[j] < -PIVOT_EPS);
        let Some(q) = entering else { break };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = tab[i][q];
            if a > PIVOT_EPS {
                let ratio = tab[i][width] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        if ratio < best - 1e-15 || (ratio <= best + 1e-15 && basis[i] < basis[k]) {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
        }
        // unbounded direction cannot happen for a phase-1 objective bounded below
        let Some((p, _)) = leave else { break };
        pivot(&mut tab, &mut cost, p, q);
        basis[p] = q;
        pivots += 1;
        if pivots >= MAX_PIVOTS {
            return Err(Error::IterationLimit { pivots });
        }
    }

    let phase1_optimum = -cost[width];
    if phase1_optimum > INFEASIBLE_TOL {
        return Ok(LpOutcome::Infeasible { phase1_optimum });
    }
    let mut x = vec![0.0; n];
    for (i, &bj) in basis.iter().enumerate() {
        let v = tab[i][width];
        match cols[bj] {
            Column::Plus(j) => x[j] += v,
            Column::Minus(j) => x[j] -= v,
            Column::Artificial => {}
        }
    }
    for (xi, nn) in x.iter_mut().zip(nonneg) {
        if *nn && *xi < 0.0 {
            *xi = 0.0;
        }
    }
    let ax = a_eq.matvec(&x);
    let residual = ax.iter().zip(b_eq).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    if residual > RESIDUAL_TOL {
        return Ok(LpOutcome::Infeasible { phase1_optimum: phase1_optimum.max(residual) });
    }
    Ok(LpOutcome::Feasible(x))
}

fn pivot(tab: &mut [Vec<f64>], cost: &mut [f64], p: usize, q: usize) {
    let inv = 1.0 / tab[p][q];
    tab[p].iter_mut().for_each(|x| *x *= inv);
    tab[p][q] = 1.0;
    let prow = tab[p].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == p {
            continue;
        }
        let f = row[q];
        if f == 0.0 {
            continue;
        }
        for (x, y) in row.iter_mut().zip(&prow) {
            *x -= f * y;
        }
        row[q] = 0.0;
    }
    let f = cost[q];
    if f != 0.0 {
        for (x, y) in cost.iter_mut().zip(&prow) {
            *x -= f * y;
        }
        cost[q] = 0.0;
    }
}
