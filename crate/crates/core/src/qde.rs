//! The truncated quantum differential equation.
//!
//! Raw form: `t Phi' = -(1/z) E(t) Phi`. Modified form, for `Phi~ = t^mu Phi`:
//! `Phi~' = (-(1/z) E(1) + mu / t) Phi~`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmath::c64;
use crate::error::{Error, Result};
use crate::gw_model::{admissible_classes, cqmatrix_to_c, CohModel, TruncationParams};
use crate::linalg::{eigen, mat_pow_t, CMatrix, Spectrum};
use crate::ode::{integrate_linear, Gauged, OdeOptions, OdeStats};
use crate::EULER_GAMMA;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    ClosedFormCurve,
    CanonicalCurve,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gauge {
    Raw,
    Modified,
}

#[derive(Clone, Debug)]
pub struct FundamentalSolution {
    pub kind: SolutionKind,
    pub gauge: Gauge,
    pub t_grid: Vec<f64>,
    pub samples: Vec<Gauged>,
    pub stats: OdeStats,
}

impl FundamentalSolution {
    /// `ln ||Phi_t v||` at every sample.
    pub fn log_norms(&self, v: &[Complex64]) -> Vec<f64> {
        self.samples
            .iter()
            .map(|g| {
                let w = g.phi.apply(v);
                w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().ln() + g.log_scale
            })
            .collect()
    }

    /// Smallest `|det Phi| / ||Phi||^n` over the samples (scale free).
    pub fn min_det_ratio(&self) -> f64 {
        self.samples
            .iter()
            .map(|g| {
                let n = g.phi.n() as i32;
                g.phi.det().norm() / g.phi.norm_fro().powi(n)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// `E(u)` split as `c1 + sum_k u^{p_k} M_k`, so that it can be evaluated cheaply in `u`.
#[derive(Clone, Debug)]
pub struct EndoPieces {
    pub c1: CMatrix,
    pub terms: Vec<(i32, CMatrix)>,
}

impl EndoPieces {
    pub fn new(model: &CohModel, params: &TruncationParams) -> Result<Self> {
        let mut terms = Vec::new();
        for c in admissible_classes(model, params)? {
            let w = c64(-params.scale_omega * c.omega_dot_d, -c.b_dot_d).exp() * c.c1_dot_d as f64;
            terms.push((c.c1_dot_d as i32, cqmatrix_to_c(&c.t_d).scale(w)));
        }
        Ok(EndoPieces {
            c1: model.c1_c(),
            terms,
        })
    }

    pub fn eval(&self, u: f64) -> CMatrix {
        let mut e = self.c1.clone();
        for (p, m) in &self.terms {
            e = &e + &m.scale_re(u.powi(*p));
        }
        e
    }
}

fn check_start(phi0: &CMatrix, t_grid: &[f64], n: usize) -> Result<()> {
    if phi0.n() != n {
        return Err(Error::InvalidInput("initial matrix has the wrong size".into()));
    }
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(Error::InvalidInput("t grid must be nonempty and positive".into()));
    }
    let ratio = phi0.det().norm() / phi0.norm_fro().powi(n as i32).max(f64::MIN_POSITIVE);
    if !(ratio > 1e-12) {
        return Err(Error::InvalidInput("initial matrix is not invertible".into()));
    }
    Ok(())
}

/// Integrates the modified equation starting from `phi0` at `t_grid[0]`.
/// A decreasing grid integrates backward.
pub fn integrate_modified(
    model: &CohModel,
    params: &TruncationParams,
    phi0: &CMatrix,
    t_grid: &[f64],
) -> Result<FundamentalSolution> {
    integrate_modified_with(model, params, phi0, t_grid, &OdeOptions::default())
}

pub fn integrate_modified_with(
    model: &CohModel,
    params: &TruncationParams,
    phi0: &CMatrix,
    t_grid: &[f64],
    opts: &OdeOptions,
) -> Result<FundamentalSolution> {
    check_start(phi0, t_grid, model.n())?;
    let pieces = EndoPieces::new(model, params)?;
    let a0 = pieces.eval(1.0).scale(-params.z.inv());
    let mu = model.mu_c();
    let (samples, stats) = integrate_linear(|t| &a0 + &mu.scale_re(1.0 / t), t_grid[0], phi0, t_grid, opts)?;
    Ok(FundamentalSolution {
        kind: SolutionKind::Numeric,
        gauge: Gauge::Modified,
        t_grid: t_grid.to_vec(),
        samples,
        stats,
    })
}

/// Integrates the raw equation starting from `phi0` at `t_grid[0]`.
pub fn integrate_raw(
    model: &CohModel,
    params: &TruncationParams,
    phi0: &CMatrix,
    t_grid: &[f64],
) -> Result<FundamentalSolution> {
    integrate_raw_with(model, params, phi0, t_grid, &OdeOptions::default())
}

pub fn integrate_raw_with(
    model: &CohModel,
    params: &TruncationParams,
    phi0: &CMatrix,
    t_grid: &[f64],
    opts: &OdeOptions,
) -> Result<FundamentalSolution> {
    check_start(phi0, t_grid, model.n())?;
    let pieces = EndoPieces::new(model, params)?;
    let minus_inv_z = -params.z.inv();
    let (samples, stats) = integrate_linear(|t| pieces.eval(t).scale(minus_inv_z / t), t_grid[0], phi0, t_grid, opts)?;
    Ok(FundamentalSolution {
        kind: SolutionKind::Numeric,
        gauge: Gauge::Raw,
        t_grid: t_grid.to_vec(),
        samples,
        stats,
    })
}

/// `t^{-(1/z) c1} A` for the genus `g` curve.
pub fn closed_form_curve(genus: u32, z: Complex64, a: &CMatrix, t: f64) -> Result<CMatrix> {
    let model = crate::gw_model::builtin_curve(genus.max(1));
    let m = model.c1_c().scale(-z.inv());
    Ok(&mat_pow_t(&m, t)? * a)
}

/// `A = [[1, 0], [2(g-1) C_eu, 1]]`.
pub fn canonical_a(genus: u32) -> CMatrix {
    CMatrix::real2(1.0, 0.0, 2.0 * (genus as f64 - 1.0) * EULER_GAMMA, 1.0)
}

pub fn canonical_solution_curve(genus: u32, z: Complex64, t: f64) -> Result<CMatrix> {
    if genus == 0 {
        return Err(Error::InvalidInput("canonical curve solution needs genus >= 1".into()));
    }
    closed_form_curve(genus, z, &canonical_a(genus), t)
}

#[derive(Clone, Debug)]
pub struct AsymptoticSpectrum {
    pub eigenvalues: Vec<Complex64>,
    /// `Some(1)` when the spectrum is simple; `None` when it cannot be decided.
    pub ramification: Option<u32>,
    pub distinct_real_parts: bool,
    pub distinct_imag_parts: bool,
    pub spectrum: Spectrum,
}

/// Spectrum of `-(1/z) E(1)`.
pub fn asymptotic_spectrum(model: &CohModel, params: &TruncationParams) -> Result<AsymptoticSpectrum> {
    let m = EndoPieces::new(model, params)?.eval(1.0).scale(-params.z.inv());
    let spectrum = eigen(&m)?;
    let simple = spectrum.is_semisimple && spectrum.clusters.iter().all(|c| c.algebraic == 1);
    Ok(AsymptoticSpectrum {
        eigenvalues: spectrum.eigenvalues.clone(),
        ramification: if simple { Some(1) } else { None },
        distinct_real_parts: spectrum.distinct_real_parts,
        distinct_imag_parts: spectrum.distinct_imag_parts,
        spectrum,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateFit {
    pub rate: f64,
    /// Coefficient of `ln t`.
    pub log_coeff: f64,
    pub intercept: f64,
    /// Largest absolute residual on the tail.
    pub residual: f64,
}

/// Least squares for `y ~ c0 t + c1 ln t + c2` (real data).
pub(crate) fn fit_t_log_const(t: &[f64], y: &[f64]) -> Option<[f64; 3]> {
    let rows: Vec<Vec<f64>> = t.iter().map(|&t| alloc::vec![t, t.ln(), 1.0]).collect();
    let x = lstsq(&rows, y)?;
    Some([x[0], x[1], x[2]])
}

/// Dense least squares by modified Gram-Schmidt QR with column scaling.
/// Returns `None` for rank deficient designs.
pub(crate) fn lstsq(rows: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let m = rows.len();
    let k = rows.first()?.len();
    if m < k {
        return None;
    }
    let mut scale = alloc::vec![0.0f64; k];
    for r in rows {
        for j in 0..k {
            scale[j] = scale[j].max(r[j].abs());
        }
    }
    if scale.contains(&0.0) {
        return None;
    }
    let mut q: Vec<Vec<f64>> = (0..k).map(|j| rows.iter().map(|r| r[j] / scale[j]).collect()).collect();
    let mut r = alloc::vec![alloc::vec![0.0f64; k]; k];
    for c in 0..k {
        // two passes of orthogonalisation keep the basis orthogonal to rounding
        for _ in 0..2 {
            for j in 0..c {
                let d: f64 = (0..m).map(|i| q[j][i] * q[c][i]).sum();
                r[j][c] += d;
                for i in 0..m {
                    q[c][i] -= d * q[j][i];
                }
            }
        }
        let nrm = q[c].iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm < 1e-12 {
            return None;
        }
        r[c][c] = nrm;
        for x in q[c].iter_mut() {
            *x /= nrm;
        }
    }
    let qty: Vec<f64> = (0..k).map(|j| (0..m).map(|i| q[j][i] * y[i]).sum()).collect();
    let mut x = alloc::vec![0.0f64; k];
    for c in (0..k).rev() {
        let s: f64 = (c + 1..k).map(|j| r[c][j] * x[j]).sum();
        x[c] = (qty[c] - s) / r[c][c];
    }
    Some(x.iter().zip(&scale).map(|(a, s)| a / s).collect())
}

/// Growth rate from samples of `ln |f(t)|`.
///
/// The fit uses the `t` coefficient of `ln|f| ~ r t + c ln t + b` on the upper
/// half of the grid (by `t`), so algebraic prefactors do not bias `r`.
pub fn growth_rate_log(t: &[f64], log_abs: &[f64]) -> Result<RateFit> {
    if t.len() != log_abs.len() {
        return Err(Error::InvalidInput("growth_rate: length mismatch".into()));
    }
    if t.len() < 20 {
        return Err(Error::InvalidInput("growth_rate needs at least 20 samples".into()));
    }
    let mut pairs: Vec<(f64, f64)> = t.iter().copied().zip(log_abs.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
    let (t0, t1) = (pairs[0].0, pairs[pairs.len() - 1].0);
    if !(t0 > 0.0) || t1 / t0 < 10.0 {
        return Err(Error::InvalidInput("growth_rate needs t1/t0 >= 10".into()));
    }
    let tail: Vec<(f64, f64)> = pairs[pairs.len() / 2..]
        .iter()
        .copied()
        .filter(|p| p.1.is_finite())
        .collect();
    if tail.len() < 3 {
        return Err(Error::UndefinedRate);
    }
    let ts: Vec<f64> = tail.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = tail.iter().map(|p| p.1).collect();
    let [r, c, b] = fit_t_log_const(&ts, &ys).ok_or(Error::UndefinedRate)?;
    let residual = ts
        .iter()
        .zip(&ys)
        .map(|(&t, &y)| (y - (r * t + c * t.ln() + b)).abs())
        .fold(0.0, f64::max);
    Ok(RateFit {
        rate: r,
        log_coeff: c,
        intercept: b,
        residual,
    })
}

/// Growth rate of a complex time series.
pub fn growth_rate(t: &[f64], f: &[Complex64]) -> Result<RateFit> {
    if f.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::UndefinedRate);
    }
    let logs: Vec<f64> = f.iter().map(|z| z.norm().ln()).collect();
    growth_rate_log(t, &logs)
}

/// `integral of Phi v`: pairing of `Phi v` with the unit class.
pub fn integrate_class(model: &CohModel, phi: &CMatrix, v: &[Complex64]) -> Result<Complex64> {
    let w = model.integration_functional()?;
    Ok(w.iter().zip(phi.apply(v)).map(|(a, b)| a * b).sum())
}
