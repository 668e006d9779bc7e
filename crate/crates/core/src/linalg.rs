//! Small dense complex linear algebra.
//!
//! Everything here is sized for the 2x2 .. 8x8 operators that show up in the
//! quantum differential equation, with a hard cap of 64 for the eigensolver.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmath::{c64, is_finite};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Maximum dimension accepted by [`eigen`].
pub const MAX_EIGEN_DIM: usize = 64;

/// Relative gap under which two computed eigenvalues are treated as one.
pub const MULTIPLICITY_GAP: f64 = 1e-7;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    /// Builds a matrix from rows, rejecting ragged or non-finite input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidInput(alloc::format!(
                    "matrix row of length {} in a {n}x{n} matrix",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        let m = CMatrix { n, data };
        if !m.is_finite() {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        Ok(m)
    }

    /// Real 2x2 convenience constructor, handy in tests and builtin models.
    pub fn real2(a: f64, b: f64, c: f64, d: f64) -> Self {
        CMatrix {
            n: 2,
            data: vec![c64(a, 0.0), c64(b, 0.0), c64(c, 0.0), c64(d, 0.0)],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| is_finite(*z))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex64]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (max column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// LU factorisation with partial pivoting; returns `(lu, perm, sign)`.
    fn lu(&self) -> (CMatrix, Vec<usize>, f64, bool) {
        let n = self.n;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmax == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                for j in k + 1..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= f * akj;
                }
            }
        }
        (a, perm, sign, singular)
    }

    pub fn det(&self) -> Complex64 {
        let (lu, _, sign, singular) = self.lu();
        if singular {
            return ZERO;
        }
        (0..self.n).fold(c64(sign, 0.0), |acc, i| acc * lu[(i, i)])
    }

    /// Solves `self * x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n;
        let (lu, perm, _, singular) = self.lu();
        if singular {
            return Err(Error::InvalidInput("singular matrix".into()));
        }
        let mut x: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= lu[(i, i)];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        let n = self.n;
        let mut inv = CMatrix::zeros(n);
        for j in 0..n {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            let col = self.solve(&e)?;
            inv.set_column(j, &col);
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// One eigenvalue with its multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCluster {
    pub value: Complex64,
    pub algebraic: usize,
    pub geometric: usize,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Eigenvalues repeated according to algebraic multiplicity, grouped by cluster.
    pub eigenvalues: Vec<Complex64>,
    pub clusters: Vec<EigenCluster>,
    /// Columns span the generalized eigenspaces, in the order of `eigenvalues`.
    pub eigenvectors: CMatrix,
    pub is_semisimple: bool,
    pub distinct_real_parts: bool,
    pub distinct_imag_parts: bool,
}

/// Singular value decomposition data from one-sided Jacobi: `m * v = u * diag(sigma)`.
#[derive(Clone, Debug)]
pub struct Svd {
    /// Descending.
    pub sigma: Vec<f64>,
    /// Right singular vectors as columns, matching `sigma`.
    pub v: CMatrix,
}

/// Complex one-sided Jacobi SVD.
pub fn svd(m: &CMatrix) -> Result<Svd> {
    let n = m.n();
    // work on columns of a
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            e
        })
        .collect();
    let dot = |x: &[Complex64], y: &[Complex64]| -> Complex64 { x.iter().zip(y).map(|(a, b)| a.conj() * b).sum() };
    let max_sweeps = 80;
    // columns that collapse to rounding level never become exactly orthogonal
    let floor = 1e-30 * a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
    let mut converged = n < 2;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() || g <= floor {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // phase-align column q so the inner product is real
                let pc = phase.conj();
                for col in [&mut a, &mut v] {
                    for i in 0..n {
                        let xp = col[p][i];
                        let xq = col[q][i] * pc;
                        col[p][i] = xp * c - xq * s;
                        col[q][i] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "jacobi svd",
            iterations: max_sweeps,
        });
    }
    let mut order: Vec<(f64, usize)> = a
        .iter()
        .enumerate()
        .map(|(j, col)| (col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), j))
        .collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(core::cmp::Ordering::Equal));
    let mut vm = CMatrix::zeros(n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &(s, j)) in order.iter().enumerate() {
        sigma.push(s);
        vm.set_column(k, &v[j]);
    }
    Ok(Svd { sigma, v: vm })
}

/// Spectral norm.
pub fn op_norm(m: &CMatrix) -> f64 {
    match svd(m) {
        Ok(s) => s.sigma.first().copied().unwrap_or(0.0),
        // Jacobi failing is not expected at these sizes; fall back to Frobenius
        Err(_) => m.norm_fro(),
    }
}

/// Numerical rank with a relative singular value floor.
pub fn rank(m: &CMatrix, rel_floor: f64) -> Result<usize> {
    let s = svd(m)?;
    let top = s.sigma.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0);
    }
    Ok(s.sigma.iter().filter(|&&x| x > rel_floor * top).count())
}

fn hessenberg(m: &CMatrix) -> CMatrix {
    let n = m.n();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- (I - 2 v v^H) H
        for j in 0..n {
            let s: Complex64 = (0..v.len()).map(|r| v[r].conj() * h[(k + 1 + r, j)]).sum();
            for r in 0..v.len() {
                h[(k + 1 + r, j)] -= v[r] * s * 2.0;
            }
        }
        // H <- H (I - 2 v v^H)
        for i in 0..n {
            let s: Complex64 = (0..v.len()).map(|r| h[(i, k + 1 + r)] * v[r]).sum();
            for r in 0..v.len() {
                h[(i, k + 1 + r)] -= s * v[r].conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let r = disc.sqrt();
    (half_tr + r, half_tr - r)
}

/// Eigenvalues of a complex matrix by Hessenberg reduction and shifted QR.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let n = m.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(m);
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(n);
    let mut hi = n;
    let mut iter = 0usize;
    let cap = 100 * n;
    while hi > 0 {
        if hi == 1 {
            out.push(h[(0, 0)]);
            break;
        }
        let mut l = hi - 1;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            if sub <= f64::EPSILON * diag || sub <= 1e-300 * scale {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi - 1 {
            out.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        if l == hi - 2 {
            let (e1, e2) = eig2(
                h[(hi - 2, hi - 2)],
                h[(hi - 2, hi - 1)],
                h[(hi - 1, hi - 2)],
                h[(hi - 1, hi - 1)],
            );
            out.push(e1);
            out.push(e2);
            hi -= 2;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > cap {
            return Err(Error::NonConvergence {
                what: "shifted QR",
                iterations: cap,
            });
        }
        let shift = if iter.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi - 1, hi - 1)] + c64(0.75 * h[(hi - 1, hi - 2)].norm(), 0.0)
        } else {
            let (e1, e2) = eig2(
                h[(hi - 2, hi - 2)],
                h[(hi - 2, hi - 1)],
                h[(hi - 1, hi - 2)],
                h[(hi - 1, hi - 1)],
            );
            let d = h[(hi - 1, hi - 1)];
            if (e1 - d).norm() < (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };
        for k in l..hi {
            h[(k, k)] -= shift;
        }
        let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - l);
        for k in l..hi - 1 {
            let x = h[(k, k)];
            let y = h[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (1.0, ZERO)
            } else if x.norm() == 0.0 {
                (0.0, y.conj() / y.norm())
            } else {
                (x.norm() / r, (x / x.norm()) * y.conj() / r)
            };
            for j in k..hi {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = l + idx;
            let top = (k + 2).min(hi);
            for i in l..top {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s.conj();
                h[(i, k + 1)] = -a * s + b * c;
            }
        }
        for k in l..hi {
            h[(k, k)] += shift;
        }
    }
    Ok(out)
}

/// Basis of the numerical null space: right singular vectors with the `dim` smallest singular values.
fn null_basis(m: &CMatrix, dim: usize) -> Result<(Vec<Vec<Complex64>>, Vec<f64>)> {
    let s = svd(m)?;
    let n = m.n();
    let cols = (n - dim..n).map(|j| s.v.column(j)).collect();
    Ok((cols, s.sigma))
}

/// Eigen-decomposition with multiplicity grouping.
pub fn eigen(m: &CMatrix) -> Result<Spectrum> {
    let n = m.n();
    if n > MAX_EIGEN_DIM {
        return Err(Error::InvalidInput(alloc::format!(
            "eigen: dimension {n} exceeds {MAX_EIGEN_DIM}"
        )));
    }
    if !m.is_finite() {
        return Err(Error::InvalidInput("eigen: non-finite matrix".into()));
    }
    let raw = eigenvalues(m)?;
    let norm = op_norm(m).max(1.0);
    let gap = MULTIPLICITY_GAP * norm;

    // single-linkage grouping
    let mut group: Vec<usize> = (0..raw.len()).collect();
    fn find(g: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while g[r] != r {
            r = g[r];
        }
        g[i] = r;
        r
    }
    for i in 0..raw.len() {
        for j in i + 1..raw.len() {
            if (raw[i] - raw[j]).norm() <= gap {
                let (ri, rj) = (find(&mut group, i), find(&mut group, j));
                if ri != rj {
                    group[rj] = ri;
                }
            }
        }
    }
    let mut reps: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<Complex64>> = Vec::new();
    for i in 0..raw.len() {
        let r = find(&mut group, i);
        match reps.iter().position(|&x| x == r) {
            Some(p) => members[p].push(raw[i]),
            None => {
                reps.push(r);
                members.push(alloc::vec![raw[i]]);
            }
        }
    }
    // deterministic order: by real part then imaginary part
    let mut clusters: Vec<(Complex64, usize)> = members
        .iter()
        .map(|ms| {
            let mean = ms.iter().sum::<Complex64>() / ms.len() as f64;
            (mean, ms.len())
        })
        .collect();
    clusters.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.0.im.partial_cmp(&b.0.im).unwrap_or(core::cmp::Ordering::Equal))
    });

    let geo_tol = 1e-6 * norm;
    let mut eigvals = Vec::with_capacity(n);
    let mut vecs = CMatrix::zeros(n);
    let mut out_clusters = Vec::with_capacity(clusters.len());
    let mut semisimple = true;
    let mut col = 0;
    for &(lambda, mult) in &clusters {
        let shifted = m - &CMatrix::identity(n).scale(lambda);
        let (_, sig) = null_basis(&shifted, mult)?;
        let geometric = sig.iter().filter(|&&s| s <= geo_tol).count().clamp(1, mult);
        if geometric < mult {
            semisimple = false;
        }
        // generalized eigenspace = kernel of (M - lambda)^mult
        let mut power = shifted.clone();
        for _ in 1..mult {
            power = &power * &shifted;
        }
        let (basis, _) = null_basis(&power, mult)?;
        for v in basis {
            vecs.set_column(col, &v);
            eigvals.push(lambda);
            col += 1;
        }
        out_clusters.push(EigenCluster {
            value: lambda,
            algebraic: mult,
            geometric,
        });
    }
    let tol = 1e-9 * norm;
    let distinct = |f: fn(&Complex64) -> f64| {
        for i in 0..eigvals.len() {
            for j in i + 1..eigvals.len() {
                if (f(&eigvals[i]) - f(&eigvals[j])).abs() <= tol {
                    return false;
                }
            }
        }
        true
    };
    let distinct_real_parts = distinct(|z| z.re);
    let distinct_imag_parts = distinct(|z| z.im);
    Ok(Spectrum {
        eigenvalues: eigvals,
        clusters: out_clusters,
        eigenvectors: vecs,
        is_semisimple: semisimple,
        distinct_real_parts,
        distinct_imag_parts,
    })
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.n();
    let norm = a.norm_one();
    if !norm.is_finite() {
        return Err(Error::Overflow {
            what: "linalg",
            exponent: norm,
        });
    }
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > 0.5 {
        scaled_norm *= 0.5;
        squarings += 1;
    }
    let scaled = a.scale_re(0.5f64.powi(squarings as i32));
    let mut result = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=30 {
        term = (&term * &scaled).scale_re(1.0 / k as f64);
        result = &result + &term;
        if term.max_abs() <= f64::EPSILON * 1e-3 * result.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    if !result.is_finite() {
        return Err(Error::Overflow {
            what: "linalg",
            exponent: norm,
        });
    }
    Ok(result)
}

/// `t^M = exp(ln(t) M)` for `t > 0`.
pub fn mat_pow_t(m: &CMatrix, t: f64) -> Result<CMatrix> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidInput(alloc::format!("mat_pow_t requires t > 0, got {t}")));
    }
    expm(&m.scale_re(t.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::E;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn eigen_of_p1_endomorphism() {
        let s = eigen(&CMatrix::real2(0.0, 2.0, 2.0, 0.0)).unwrap();
        let ev = sorted_re(s.eigenvalues.clone());
        assert!(close(ev[0], c64(-2.0, 0.0), 1e-12));
        assert!(close(ev[1], c64(2.0, 0.0), 1e-12));
        assert!(s.is_semisimple && s.distinct_real_parts);
        let m = CMatrix::real2(0.0, 2.0, 2.0, 0.0);
        for k in 0..2 {
            let v = s.eigenvectors.column(k);
            let mv = m.apply(&v);
            let res: f64 = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - s.eigenvalues[k] * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-9 * 2.0);
        }
    }

    #[test]
    fn eigen_identity_and_nilpotent() {
        let s = eigen(&CMatrix::identity(2)).unwrap();
        assert_eq!(s.clusters.len(), 1);
        assert_eq!(s.clusters[0].algebraic, 2);
        assert!(s.is_semisimple);
        assert!(!s.distinct_real_parts);
        assert!(close(s.eigenvalues[0], c64(1.0, 0.0), 1e-14));

        let s = eigen(&CMatrix::real2(0.0, 0.0, -2.0, 0.0)).unwrap();
        assert_eq!(s.eigenvalues.len(), 2);
        assert!(s.eigenvalues.iter().all(|z| z.norm() < 1e-7));
        assert!(!s.is_semisimple);
        assert_eq!(s.clusters[0].geometric, 1);
        // generalized eigenvectors still form a basis
        assert!(s.eigenvectors.det().norm() > 0.5);
    }

    #[test]
    fn eigen_larger_triangular() {
        let m = CMatrix::from_fn(5, |i, j| {
            if i == j {
                c64(i as f64 + 1.0, 0.5 * i as f64)
            } else if j > i {
                c64(0.3, -0.1 * j as f64)
            } else {
                c64(0.0, 0.0)
            }
        });
        let ev = eigenvalues(&m).unwrap();
        for i in 0..5 {
            let want = c64(i as f64 + 1.0, 0.5 * i as f64);
            assert!(ev.iter().any(|z| close(*z, want, 1e-10)), "missing {want}");
        }
    }

    #[test]
    fn op_norm_examples() {
        assert!((op_norm(&CMatrix::identity(3)) - 1.0).abs() < 1e-12);
        let d = CMatrix::diag(&[c64(0.0, 3.0), c64(1.0, 0.0)]);
        assert!((op_norm(&d) - 3.0).abs() < 1e-12);
        assert!((op_norm(&CMatrix::real2(0.0, 2.0, 2.0, 0.0)) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mat_pow_examples() {
        // nilpotent order 2: exact I + ln(t) m
        let m = CMatrix::real2(0.0, 0.0, 2.0, 0.0);
        let p = mat_pow_t(&m, E).unwrap();
        assert!(close(p[(0, 0)], c64(1.0, 0.0), 1e-15));
        assert!(close(p[(1, 0)], c64(2.0, 0.0), 1e-15));
        assert!(close(p[(0, 1)], c64(0.0, 0.0), 0.0));
        assert!(close(p[(1, 1)], c64(1.0, 0.0), 1e-15));

        let any = CMatrix::real2(0.3, -1.0, 2.0, 0.7);
        let p = mat_pow_t(&any, 1.0).unwrap();
        assert!((&p - &CMatrix::identity(2)).max_abs() < 1e-15);

        let d = CMatrix::real2(1.0, 0.0, 0.0, -1.0);
        let p = mat_pow_t(&d, 4.0).unwrap();
        assert!(close(p[(0, 0)], c64(4.0, 0.0), 1e-13));
        assert!(close(p[(1, 1)], c64(0.25, 0.0), 1e-14));

        assert!(mat_pow_t(&d, 0.0).is_err());
        assert!(matches!(
            mat_pow_t(&CMatrix::real2(1e6, 0.0, 0.0, 0.0), 10.0),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn solve_inverse_det() {
        let m = CMatrix::real2(2.0, 1.0, 1.0, 3.0);
        assert!(close(m.det(), c64(5.0, 0.0), 1e-14));
        let inv = m.inverse().unwrap();
        assert!((&(&m * &inv) - &CMatrix::identity(2)).max_abs() < 1e-15);
        assert!(CMatrix::real2(1.0, 2.0, 2.0, 4.0).inverse().is_err());
    }

    #[test]
    fn generalized_eigenspaces_are_form_orthogonal() {
        // E(1) for P1 with a complex twist; symmetric for the off-diagonal pairing
        let pairing = CMatrix::real2(0.0, 1.0, 1.0, 0.0);
        let w = c64(0.3, 0.8).exp();
        let e = CMatrix::from_rows(&[
            alloc::vec![c64(0.0, 0.0), w * 2.0],
            alloc::vec![c64(2.0, 0.0), c64(0.0, 0.0)],
        ])
        .unwrap();
        let s = eigen(&e).unwrap();
        let u = s.eigenvectors.column(0);
        let v = s.eigenvectors.column(1);
        let pv = pairing.apply(&v);
        let b: Complex64 = u.iter().zip(&pv).map(|(a, b)| a * b).sum();
        assert!(b.norm() < 1e-8);
    }
}
