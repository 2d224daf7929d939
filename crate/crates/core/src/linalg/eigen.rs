//! Nonsymmetric dense eigensolver.
//!
//! Householder reduction to upper Hessenberg form followed by the Francis
//! double-shift QR iteration and back-substitution for eigenvectors. This
//! is the classical EISPACK `orthes`/`hqr2` pair (as popularised by JAMA),
//! without balancing, plus an iteration cap.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::matrix::RealMatrix;
use crate::{Error, Result};

/// Sweeps allowed per eigenvalue before giving up.
pub const SWEEPS_PER_EIGENVALUE: usize = 50;

/// Default relative clustering tolerance (times `‖A‖∞`).
pub const DEFAULT_CLUSTER_RTOL: f64 = 1e-8;

/// One clustered eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub value: Complex64,
    pub alg_mult: usize,
}

/// Clustered spectrum, ordered by descending real part, then descending
/// imaginary part. Multiplicities sum to the matrix dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<SpectrumEntry>,
    pub cluster_tol: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.alg_mult).sum()
    }

    /// Index of the cluster containing `mu`, if any lies within `cluster_tol`.
    pub fn find(&self, mu: Complex64) -> Option<usize> {
        self.eigenvalues
            .iter()
            .enumerate()
            .map(|(i, e)| (i, (e.value - mu).norm()))
            .filter(|(_, d)| *d <= self.cluster_tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    }

    /// Treats a cluster as real when its imaginary part is within tolerance.
    pub fn is_real(&self, index: usize) -> bool {
        self.eigenvalues[index].value.im.abs() <= self.cluster_tol
    }

    /// Largest real part.
    pub fn spectral_bound(&self) -> f64 {
        self.eigenvalues.iter().map(|e| e.value.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|e| e.value.norm()).fold(0.0, f64::max)
    }
}

/// Raw eigenpairs together with their clustering.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Individual eigenvalues, sorted like the spectrum.
    pub values: Vec<Complex64>,
    /// Unit eigenvectors; real ones have their largest entry positive,
    /// complex ones are rotated so their largest entry is real positive.
    pub vectors: Vec<Vec<Complex64>>,
    /// Cluster index (into `spectrum.eigenvalues`) of each raw eigenvalue.
    pub cluster_of: Vec<usize>,
    pub spectrum: Spectrum,
}

impl EigenDecomposition {
    /// Raw indices belonging to cluster `c`.
    pub fn members(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.cluster_of.iter().enumerate().filter(move |(_, k)| **k == c).map(|(i, _)| i)
    }

    /// Largest relative residual `‖Av − μv‖ / ‖A‖∞` over all pairs.
    pub fn max_residual(&self, a: &RealMatrix) -> f64 {
        let scale = a.norm_inf().max(f64::MIN_POSITIVE);
        let n = a.rows();
        let mut worst: f64 = 0.0;
        for (mu, v) in self.values.iter().zip(&self.vectors) {
            let mut r2 = 0.0;
            for i in 0..n {
                let row = a.row(i);
                let mut acc = Complex64::new(0.0, 0.0);
                for (aij, vj) in row.iter().zip(v) {
                    acc += vj * *aij;
                }
                r2 += (acc - mu * v[i]).norm_sqr();
            }
            worst = worst.max(libm::sqrt(r2) / scale);
        }
        worst
    }
}

/// Eigendecomposition with the default clustering tolerance `1e-8·‖A‖∞`.
pub fn eigen(a: &RealMatrix) -> Result<EigenDecomposition> {
    eigen_with_tol(a, DEFAULT_CLUSTER_RTOL * a.norm_inf())
}

pub fn eigen_with_tol(a: &RealMatrix, cluster_tol: f64) -> Result<EigenDecomposition> {
    let n = a.ensure_square()?;
    let mut h: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut v = vec![vec![0.0; n]; n];
    orthes(&mut h, &mut v);
    let (d, e) = hqr2(&mut h, &mut v)?;

    let mut pairs: Vec<(Complex64, Vec<Complex64>)> = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if e[i] == 0.0 {
            let mut x: Vec<Complex64> = (0..n).map(|r| Complex64::new(v[r][i], 0.0)).collect();
            normalize_complex(&mut x);
            pairs.push((Complex64::new(d[i], 0.0), x));
            i += 1;
        } else {
            let mut x: Vec<Complex64> = (0..n).map(|r| Complex64::new(v[r][i], v[r][i + 1])).collect();
            normalize_complex(&mut x);
            let conj: Vec<Complex64> = x.iter().map(|z| z.conj()).collect();
            let mu = Complex64::new(d[i], e[i]);
            pairs.push((mu, x));
            pairs.push((mu.conj(), conj));
            i += 2;
        }
    }
    pairs.sort_by(|p, q| order(p.0, q.0));
    let (values, vectors): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let (spectrum, cluster_of) = cluster(&values, cluster_tol);
    Ok(EigenDecomposition { values, vectors, cluster_of, spectrum })
}

fn order(a: Complex64, b: Complex64) -> core::cmp::Ordering {
    b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
}

/// Single-linkage clustering; representatives are cluster means.
fn cluster(values: &[Complex64], tol: f64) -> (Spectrum, Vec<usize>) {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= tol {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut sums: Vec<(Complex64, usize)> = Vec::new();
    let mut raw_cluster = vec![0; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        let k = match roots.iter().position(|x| *x == r) {
            Some(k) => k,
            None => {
                roots.push(r);
                sums.push((Complex64::new(0.0, 0.0), 0));
                roots.len() - 1
            }
        };
        sums[k].0 += values[i];
        sums[k].1 += 1;
        raw_cluster[i] = k;
    }
    let mut entries: Vec<(usize, SpectrumEntry)> = sums
        .iter()
        .enumerate()
        .map(|(k, (s, m))| (k, SpectrumEntry { value: s / *m as f64, alg_mult: *m }))
        .collect();
    entries.sort_by(|a, b| order(a.1.value, b.1.value));
    let mut rank = vec![0; entries.len()];
    for (pos, (k, _)) in entries.iter().enumerate() {
        rank[*k] = pos;
    }
    let cluster_of = raw_cluster.iter().map(|k| rank[*k]).collect();
    let eigenvalues = entries.into_iter().map(|(_, e)| e).collect();
    (Spectrum { eigenvalues, cluster_tol: tol }, cluster_of)
}

fn normalize_complex(x: &mut [Complex64]) {
    let norm = libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum::<f64>());
    if norm == 0.0 {
        return;
    }
    // rotate the largest entry onto the positive real axis
    let big = x.iter().copied().fold(Complex64::new(0.0, 0.0), |acc, z| {
        if z.norm_sqr() > acc.norm_sqr() {
            z
        } else {
            acc
        }
    });
    let phase = big.conj() / big.norm();
    for z in x.iter_mut() {
        *z = *z * phase / norm;
    }
}

fn orthes(h: &mut [Vec<f64>], v: &mut [Vec<f64>]) {
    let n = h.len();
    let high = n.saturating_sub(1);
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h[i][m - 1].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[i][m - 1] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = libm::sqrt(hh);
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;
        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[i][j];
            }
            f /= hh;
            for i in m..=high {
                h[i][j] -= f * ort[i];
            }
        }
        for row in h.iter_mut().take(high + 1) {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * row[j];
            }
            f /= hh;
            for j in m..=high {
                row[j] -= f * ort[j];
            }
        }
        ort[m] *= scale;
        h[m][m - 1] = scale * g;
    }

    for (i, row) in v.iter_mut().enumerate() {
        row.iter_mut().for_each(|x| *x = 0.0);
        row[i] = 1.0;
    }
    for m in (1..high).rev() {
        if h[m][m - 1] == 0.0 {
            continue;
        }
        for i in m + 1..=high {
            ort[i] = h[i][m - 1];
        }
        for j in m..=high {
            let mut g = 0.0;
            for i in m..=high {
                g += ort[i] * v[i][j];
            }
            g = (g / ort[m]) / h[m][m - 1];
            for i in m..=high {
                v[i][j] += g * ort[i];
            }
        }
    }
}

#[inline]
fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> (f64, f64) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

/// Francis double-shift QR on Hessenberg `h`, accumulating into `v`.
/// On return `v` holds the real eigenvector basis; `(d, e)` are the real and
/// imaginary parts, with complex pairs stored as `e[i] > 0, e[i+1] = -e[i]`.
#[allow(clippy::many_single_char_names, clippy::needless_range_loop)]
fn hqr2(h: &mut [Vec<f64>], v: &mut [Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
    let nn = h.len();
    let mut d = vec![0.0; nn];
    let mut e = vec![0.0; nn];
    if nn == 0 {
        return Ok((d, e));
    }
    let low = 0usize;
    let high = nn - 1;
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    let (mut p, mut q): (f64, f64);
    let (mut r, mut s, mut z) = (0.0, 0.0, 0.0);
    let (mut t, mut w, mut x, mut y);

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[i][j].abs();
        }
    }

    let limit = SWEEPS_PER_EIGENVALUE * nn;
    let mut total = 0usize;
    let mut iter = 0usize;
    let mut n = nn as isize - 1;
    while n >= low as isize {
        let nu = n as usize;
        // look for a single small subdiagonal element
        let mut l = nu;
        while l > low {
            s = h[l - 1][l - 1].abs() + h[l][l].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[l][l - 1].abs() <= eps * s {
                break;
            }
            l -= 1;
        }

        if l == nu {
            // one root
            h[nu][nu] += exshift;
            d[nu] = h[nu][nu];
            e[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l + 1 == nu {
            // two roots
            w = h[nu][nu - 1] * h[nu - 1][nu];
            p = (h[nu - 1][nu - 1] - h[nu][nu]) / 2.0;
            q = p * p + w;
            z = libm::sqrt(q.abs());
            h[nu][nu] += exshift;
            h[nu - 1][nu - 1] += exshift;
            x = h[nu][nu];
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                d[nu - 1] = x + z;
                d[nu] = d[nu - 1];
                if z != 0.0 {
                    d[nu] = x - w / z;
                }
                e[nu - 1] = 0.0;
                e[nu] = 0.0;
                x = h[nu][nu - 1];
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = libm::sqrt(p * p + q * q);
                p /= r;
                q /= r;
                for j in nu - 1..nn {
                    z = h[nu - 1][j];
                    h[nu - 1][j] = q * z + p * h[nu][j];
                    h[nu][j] = q * h[nu][j] - p * z;
                }
                for row in h.iter_mut().take(nu + 1) {
                    z = row[nu - 1];
                    row[nu - 1] = q * z + p * row[nu];
                    row[nu] = q * row[nu] - p * z;
                }
                for row in v.iter_mut().take(high + 1).skip(low) {
                    z = row[nu - 1];
                    row[nu - 1] = q * z + p * row[nu];
                    row[nu] = q * row[nu] - p * z;
                }
            } else {
                d[nu - 1] = x + p;
                d[nu] = x + p;
                e[nu - 1] = z;
                e[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // no convergence yet
            x = h[nu][nu];
            y = 0.0;
            w = 0.0;
            if l < nu {
                y = h[nu - 1][nu - 1];
                w = h[nu][nu - 1] * h[nu - 1][nu];
            }
            // exceptional shifts
            if iter == 10 {
                exshift += x;
                for i in low..=nu {
                    h[i][i] -= x;
                }
                s = h[nu][nu - 1].abs() + h[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = libm::sqrt(s);
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low..=nu {
                        h[i][i] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;
            total += 1;
            if total > limit {
                return Err(Error::NoConvergence { iterations: total });
            }

            // two consecutive small subdiagonal elements
            let mut m = nu - 2;
            loop {
                z = h[m][m];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[m + 1][m] + h[m][m + 1];
                q = h[m + 1][m + 1] - z - r - s;
                r = h[m + 2][m + 1];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[m][m - 1].abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h[m - 1][m - 1].abs() + z.abs() + h[m + 1][m + 1].abs()))
                {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                h[i][i - 2] = 0.0;
                if i > m + 2 {
                    h[i][i - 3] = 0.0;
                }
            }

            // double QR step on rows l..n, columns m..n
            let mut k = m;
            while k < nu {
                let notlast = k != nu - 1;
                if k != m {
                    p = h[k][k - 1];
                    q = h[k + 1][k - 1];
                    r = if notlast { h[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        k += 1;
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = libm::sqrt(p * p + q * q + r * r);
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h[k][k - 1] = -s * x;
                    } else if l != m {
                        h[k][k - 1] = -h[k][k - 1];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        p = h[k][j] + q * h[k + 1][j];
                        if notlast {
                            p += r * h[k + 2][j];
                            h[k + 2][j] -= p * z;
                        }
                        h[k][j] -= p * x;
                        h[k + 1][j] -= p * y;
                    }
                    for row in h.iter_mut().take(nu.min(k + 3) + 1) {
                        p = x * row[k] + y * row[k + 1];
                        if notlast {
                            p += z * row[k + 2];
                            row[k + 2] -= p * r;
                        }
                        row[k] -= p;
                        row[k + 1] -= p * q;
                    }
                    for row in v.iter_mut().take(high + 1).skip(low) {
                        p = x * row[k] + y * row[k + 1];
                        if notlast {
                            p += z * row[k + 2];
                            row[k + 2] -= p * r;
                        }
                        row[k] -= p;
                        row[k + 1] -= p * q;
                    }
                }
                k += 1;
            }
        }
    }

    // back-substitute to find vectors of the upper triangular form
    if norm == 0.0 {
        return Ok((d, e));
    }
    for nu in (0..nn).rev() {
        p = d[nu];
        q = e[nu];
        if q == 0.0 {
            let mut l = nu;
            h[nu][nu] = 1.0;
            for i in (0..nu).rev() {
                w = h[i][i] - p;
                r = 0.0;
                for j in l..=nu {
                    r += h[i][j] * h[j][nu];
                }
                if e[i] < 0.0 {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if e[i] == 0.0 {
                        h[i][nu] = if w != 0.0 { -r / w } else { -r / (eps * norm) };
                    } else {
                        x = h[i][i + 1];
                        y = h[i + 1][i];
                        q = (d[i] - p) * (d[i] - p) + e[i] * e[i];
                        t = (x * s - z * r) / q;
                        h[i][nu] = t;
                        h[i + 1][nu] = if x.abs() > z.abs() { (-r - w * t) / x } else { (-s - y * t) / z };
                    }
                    // overflow control
                    t = h[i][nu].abs();
                    if (eps * t) * t > 1.0 {
                        for j in i..=nu {
                            h[j][nu] /= t;
                        }
                    }
                }
            }
        } else if q < 0.0 {
            // second member of a complex pair: vector in columns nu-1, nu
            let mut l = nu - 1;
            if h[nu][nu - 1].abs() > h[nu - 1][nu].abs() {
                h[nu - 1][nu - 1] = q / h[nu][nu - 1];
                h[nu - 1][nu] = -(h[nu][nu] - p) / h[nu][nu - 1];
            } else {
                let (cr, ci) = cdiv(0.0, -h[nu - 1][nu], h[nu - 1][nu - 1] - p, q);
                h[nu - 1][nu - 1] = cr;
                h[nu - 1][nu] = ci;
            }
            h[nu][nu - 1] = 0.0;
            h[nu][nu] = 1.0;
            for i in (0..nu.saturating_sub(1)).rev() {
                let mut ra = 0.0;
                let mut sa = 0.0;
                for j in l..=nu {
                    ra += h[i][j] * h[j][nu - 1];
                    sa += h[i][j] * h[j][nu];
                }
                w = h[i][i] - p;
                if e[i] < 0.0 {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if e[i] == 0.0 {
                        let (cr, ci) = cdiv(-ra, -sa, w, q);
                        h[i][nu - 1] = cr;
                        h[i][nu] = ci;
                    } else {
                        x = h[i][i + 1];
                        y = h[i + 1][i];
                        let mut vr = (d[i] - p) * (d[i] - p) + e[i] * e[i] - q * q;
                        let vi = (d[i] - p) * 2.0 * q;
                        if vr == 0.0 && vi == 0.0 {
                            vr = eps * norm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                        }
                        let (cr, ci) = cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                        h[i][nu - 1] = cr;
                        h[i][nu] = ci;
                        if x.abs() > z.abs() + q.abs() {
                            h[i + 1][nu - 1] = (-ra - w * h[i][nu - 1] + q * h[i][nu]) / x;
                            h[i + 1][nu] = (-sa - w * h[i][nu] - q * h[i][nu - 1]) / x;
                        } else {
                            let (cr, ci) = cdiv(-r - y * h[i][nu - 1], -s - y * h[i][nu], z, q);
                            h[i + 1][nu - 1] = cr;
                            h[i + 1][nu] = ci;
                        }
                    }
                    t = h[i][nu - 1].abs().max(h[i][nu].abs());
                    if (eps * t) * t > 1.0 {
                        for j in i..=nu {
                            h[j][nu - 1] /= t;
                            h[j][nu] /= t;
                        }
                    }
                }
            }
        }
    }

    // back-transform to the original basis
    for j in (low..nn).rev() {
        let kmax = j.min(high);
        for row in v.iter_mut().take(high + 1).skip(low) {
            let mut acc = 0.0;
            for k in low..=kmax {
                acc += row[k] * h[k][j];
            }
            row[j] = acc;
        }
    }
    Ok((d, e))
}
