//! The Bessel chart of `Stab(P1)/G_a`.
//!
//! A point is a global coordinate `tau`. The chart `X_k` covers
//! `Im tau in pi[k-1, k]` and has chart argument `x = (-1)^{k-1} e^tau`, which
//! lies in the closed upper half plane. There
//!
//! ```text
//! Z(O(k-1)) = K0(x),   Z(O_p) = i pi I0(x),   Z(O(k)) = K0(x) + i pi I0(x)
//! ```
//!
//! and `phi_k = log(Z(O(k)) / Z(O(k-1)))`, continued from `phi_k(0) = 0`.
//! Points on `Im tau in pi Z` belong to the lower chart.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::bessel::{i0, i1, k0, k01, k0_plus};
use crate::cmath::{c64, continue_log, is_finite, I};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::sod::{fit_asymptotics, AsymptoticFit, ChargeSeries, FitOptions};

/// Largest step of the brane lift in the `x` plane; `f' -> 2` far out, so
/// this keeps the phase change per step near 1/2.
const MAX_LIFT_STEP: f64 = 0.25;
/// Distance from the origin where the lift switches to the principal log.
const LIFT_SEED: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct StabPointP1 {
    pub tau: Complex64,
    pub chart_k: i64,
    /// Chart argument `(-1)^{k-1} e^tau`.
    pub x: Complex64,
    pub phi_k: Complex64,
    /// `Z(O_p)`.
    pub z_point: Complex64,
    /// `Z(O(k-1))`.
    pub z_line: Complex64,
    /// `Z(O(k))`.
    pub z_next: Complex64,
    /// `Im phi_k in (0, pi)`: these are the slope stability conditions.
    pub slope_strip: bool,
}

impl StabPointP1 {
    /// Charge of `O(m)`, linear in `m`.
    pub fn line_charge(&self, m: i64) -> Complex64 {
        self.z_next + self.z_point * (m - self.chart_k) as f64
    }

    pub fn in_eventual_regime(&self) -> bool {
        self.phi_k.im > PI
    }
}

/// `k` with `Im tau in pi[k-1, k]`, boundaries to the lower chart.
pub fn chart_index(tau: Complex64) -> i64 {
    (tau.im / PI).ceil() as i64
}

/// `(-1)^{k-1} e^tau`, requiring `tau` to lie in the closed strip of chart `k`.
pub fn chart_argument(tau: Complex64, k: i64) -> Result<Complex64> {
    if !is_finite(tau) {
        return Err(Error::InvalidInput(format!("tau = {tau} is not finite")));
    }
    let rel = tau.im / PI - (k - 1) as f64;
    let slack = 1e-12 * (1.0 + tau.im.abs());
    if rel < -slack || rel > 1.0 + slack {
        return Err(Error::InvalidInput(format!(
            "tau = {tau} is outside the strip of chart {k}"
        )));
    }
    let shifted = c64(tau.re, (rel.clamp(0.0, 1.0)) * PI);
    let mut x = shifted.exp();
    if x.im < 0.0 {
        x.im = 0.0;
    }
    if !is_finite(x) || x.norm() == 0.0 {
        return Err(Error::Overflow {
            what: "stab_p1",
            exponent: tau.re,
        });
    }
    Ok(x)
}

fn brane_ratio(x: Complex64) -> Result<Complex64> {
    let r = k0_plus(x)? / k0(x)?.value;
    if !is_finite(r) || r.norm() == 0.0 {
        return Err(Error::Overflow {
            what: "stab_p1",
            exponent: 2.0 * x.re,
        });
    }
    Ok(r)
}

/// Continuous lift of `f(x) = log((K0 + i pi I0)/K0)` along a polygonal path
/// starting at the origin.
#[derive(Clone, Debug)]
pub struct BraneLift {
    x: Complex64,
    f: Complex64,
    pub steps: usize,
}

impl BraneLift {
    pub fn new() -> Self {
        BraneLift {
            x: c64(0.0, 0.0),
            f: c64(0.0, 0.0),
            steps: 0,
        }
    }

    pub fn position(&self) -> Complex64 {
        self.x
    }

    pub fn value(&self) -> Complex64 {
        self.f
    }

    /// Continues the lift along the straight segment to `target`.
    pub fn advance_to(&mut self, target: Complex64) -> Result<Complex64> {
        if target.im < 0.0 || !is_finite(target) {
            return Err(Error::Domain {
                what: "stab_p1",
                detail: format!("brane coordinate needs Im x >= 0, got {target}"),
            });
        }
        if self.x.norm() == 0.0 {
            if target.norm() == 0.0 {
                return Ok(self.f);
            }
            let seed = if target.norm() <= LIFT_SEED {
                target
            } else {
                target * (LIFT_SEED / target.norm())
            };
            self.x = seed;
            self.f = brane_ratio(seed)?.ln();
        }
        let start = self.x;
        let delta = target - start;
        let len = delta.norm();
        if len == 0.0 {
            return Ok(self.f);
        }
        let mut s = 0.0;
        let mut h = (self.x.norm().min(MAX_LIFT_STEP) / len).min(1.0);
        while s < 1.0 {
            let cap = (start + delta * s).norm().clamp(LIFT_SEED, MAX_LIFT_STEP) / len;
            h = h.min(cap);
            let s_new = (s + h).min(1.0);
            let x_new = start + delta * s_new;
            let r = brane_ratio(x_new)?;
            match continue_log(self.f, r, FRAC_PI_4) {
                Some(f) => {
                    self.f = f;
                    self.x = x_new;
                    s = s_new;
                    self.steps += 1;
                    h *= 2.0;
                }
                None => {
                    h *= 0.5;
                    if h * len < 1e-13 * (1.0 + target.norm()) {
                        return Err(Error::BranchTracking {
                            re: x_new.re,
                            im: x_new.im,
                        });
                    }
                }
            }
        }
        self.x = target;
        Ok(self.f)
    }
}

impl Default for BraneLift {
    fn default() -> Self {
        Self::new()
    }
}

/// `f(x)`, continued along the segment `[0, x]`.
pub fn brane_coordinate(x: Complex64) -> Result<Complex64> {
    BraneLift::new().advance_to(x)
}

fn point_from_parts(tau: Complex64, k: i64, x: Complex64, phi: Complex64) -> Result<StabPointP1> {
    let z_line = k0(x)?.value;
    let z_point = I * PI * i0(x).value;
    let z_next = k0_plus(x)?;
    Ok(StabPointP1 {
        tau,
        chart_k: k,
        x,
        phi_k: phi,
        z_point,
        z_line,
        z_next,
        slope_strip: phi.im > 0.0 && phi.im < PI,
    })
}

/// The Bessel parameterization at `tau`, in its own chart.
pub fn b_map(tau: Complex64) -> Result<StabPointP1> {
    b_map_in_chart(tau, chart_index(tau))
}

/// The Bessel parameterization at `tau`, written in chart `k`. Only differs
/// from [`b_map`] on the chart boundaries.
pub fn b_map_in_chart(tau: Complex64, k: i64) -> Result<StabPointP1> {
    let x = chart_argument(tau, k)?;
    let phi = brane_coordinate(x)?;
    point_from_parts(tau, k, x, phi)
}

/// Residual of `(K0 + i pi I0)/K0 (e^s) = 2 - K0(-e^s)/(K0 + i pi I0)(-e^s)`,
/// relative to the size of the left side.
pub fn glue_check(s: f64) -> Result<f64> {
    let y = c64(s.exp(), 0.0);
    let lhs = k0_plus(y)? / k0(y)?.value;
    let rhs = c64(2.0, 0.0) - k0(-y)?.value / k0_plus(-y)?;
    Ok((lhs - rhs).norm() / lhs.norm().max(1.0))
}

/// Residual of the chart transition `e^{phi_{k+1}} = 2 - e^{-phi_k}` at a point
/// on the boundary `Im tau = pi k`, relative to `|e^{phi_{k+1}}|`.
pub fn chart_transition_residual(tau: Complex64) -> Result<f64> {
    let k = chart_index(tau);
    let lo = chart_argument(tau, k)?;
    let hi = chart_argument(tau, k + 1)?;
    let e_lo = brane_ratio(lo)?;
    let e_hi = brane_ratio(hi)?;
    Ok((e_hi - (c64(2.0, 0.0) - e_lo.inv())).norm() / e_hi.norm().max(1.0))
}

/// `(kappa, k)` for the direction `b - a`.
pub fn kappa_and_chart(b: Complex64, a: Complex64) -> (Complex64, i64) {
    let d = b - a;
    let k = chart_index(d);
    let sign = if (k - 1).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    (d.exp() * (2.0 * sign), k)
}

/// Class `v(O(m)) = (1, 2 pi i m)` in the basis `1, H`.
pub fn line_bundle_class(m: i64) -> Vec<Complex64> {
    alloc::vec![c64(1.0, 0.0), c64(0.0, 2.0 * PI * m as f64)]
}

/// Class `v(O_p) = (0, 2 pi i)`.
pub fn point_class() -> Vec<Complex64> {
    alloc::vec![c64(0.0, 0.0), c64(0.0, 2.0 * PI)]
}

#[derive(Clone, Debug)]
pub struct PathSample {
    pub t: f64,
    pub point: StabPointP1,
}

#[derive(Clone, Debug)]
pub struct PathP1 {
    pub b: Complex64,
    pub a: Complex64,
    pub kappa: Complex64,
    pub chart_k: i64,
    pub samples: Vec<PathSample>,
    pub eventual_t_star: Option<f64>,
    /// `kappa` real: the path converges only in a partial compactification.
    pub boundary_case: bool,
    pub meets_slope_strip: bool,
    /// `phi_k(t) - 2 kappa t` at the last sample; tends to `i pi / 2`.
    pub asymptotic_constant: Complex64,
    /// `max |kappa t| |phi_k - 2 kappa t - i pi/2|` over the tail half.
    pub asymptotic_defect: f64,
}

/// Bound on `asymptotic_defect` above which the tail law is reported broken.
pub const ASYMPTOTIC_DEFECT_BOUND: f64 = 10.0;

impl PathP1 {
    pub fn t(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn asymptotic_law_holds(&self) -> bool {
        self.asymptotic_defect <= ASYMPTOTIC_DEFECT_BOUND
    }
}

fn check_geometric(t: &[f64]) -> Result<()> {
    if t.len() < 2 {
        return Err(Error::InvalidInput("path grid needs at least two points".into()));
    }
    if !(t[0] > 0.0) || t.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("path grid must start at t0 > 0".into()));
    }
    let q = t[1] / t[0];
    if !(q > 1.0) {
        return Err(Error::InvalidInput("path grid must be increasing".into()));
    }
    for w in t.windows(2) {
        if ((w[1] / w[0]) / q - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput("path grid must be geometric".into()));
        }
    }
    Ok(())
}

/// The path `sigma_t = B(ln(2t) + b - a)` sampled on a geometric grid.
pub fn qde_path(b: Complex64, a: Complex64, t_grid: &[f64]) -> Result<PathP1> {
    check_geometric(t_grid)?;
    let (kappa, k) = kappa_and_chart(b, a);
    let d = b - a;
    let boundary_case = kappa.im.abs() <= 1e-12 * kappa.norm();
    let mut lift = BraneLift::new();
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let tau = c64((2.0 * t).ln(), 0.0) + d;
        // x = kappa t exactly; the chart argument of tau agrees up to rounding
        let x = chart_argument(tau, k)?;
        let phi = lift.advance_to(x)?;
        samples.push(PathSample {
            t,
            point: point_from_parts(tau, k, x, phi)?,
        });
    }
    let eventual_t_star = samples.iter().find(|s| s.point.in_eventual_regime()).map(|s| s.t);
    let meets_slope_strip = samples.iter().any(|s| s.point.slope_strip);
    let last = samples.last().ok_or(Error::Internal("empty path".into()))?;
    let asymptotic_constant = last.point.phi_k - kappa * (2.0 * last.t);
    let n = samples.len();
    let c = c64(0.0, FRAC_PI_2);
    let asymptotic_defect = samples[n / 2..]
        .iter()
        .map(|s| (s.point.phi_k - kappa * (2.0 * s.t) - c).norm() * (kappa * s.t).norm())
        .fold(0.0, f64::max);
    Ok(PathP1 {
        b,
        a,
        kappa,
        chart_k: k,
        samples,
        eventual_t_star,
        boundary_case,
        meets_slope_strip,
        asymptotic_constant,
        asymptotic_defect,
    })
}

#[derive(Clone, Debug)]
pub struct EventualObject {
    pub label: alloc::string::String,
    pub class_v: Vec<Complex64>,
    pub expected_alpha: Complex64,
    pub fit: AsymptoticFit,
    pub series: ChargeSeries,
}

/// Tolerance for matching fitted exponents against `-kappa`, `+kappa`.
pub const EXPONENT_TOL: f64 = 1e-2;

/// `O(k-1)` and `O(k)` with their measured exponents (`-kappa` and `+kappa`).
pub fn eventual_objects(path: &PathP1) -> Result<Vec<EventualObject>> {
    if path.boundary_case {
        return Err(Error::NoEventualRegime);
    }
    let t_star = path.eventual_t_star.ok_or(Error::NoEventualRegime)?;
    let tail: Vec<&PathSample> = path.samples.iter().filter(|s| s.t >= t_star).collect();
    let t: Vec<f64> = tail.iter().map(|s| s.t).collect();
    let k = path.chart_k;
    let objects = [
        (
            k - 1,
            -path.kappa,
            tail.iter().map(|s| s.point.z_line).collect::<Vec<_>>(),
        ),
        (k, path.kappa, tail.iter().map(|s| s.point.z_next).collect::<Vec<_>>()),
    ];
    let mut out = Vec::with_capacity(2);
    for (m, expected, z) in objects {
        let label = format!("O({m})");
        let class_v = line_bundle_class(m);
        let (fit, series) = fit_asymptotics(&label, &class_v, &t, &z, &FitOptions::default())?;
        if (fit.alpha - expected).norm() > EXPONENT_TOL {
            return Err(Error::ExponentMismatch {
                label,
                measured: format!("{}", fit.alpha),
                expected: format!("{expected}"),
            });
        }
        out.push(EventualObject {
            label,
            class_v,
            expected_alpha: expected,
            fit,
            series,
        });
    }
    Ok(out)
}

/// The raw fundamental solution of the P1 equation whose charges are the
/// Bessel path: columns for the basis `e0 = (1, 0)`, `e1 = (0, 1)` of the
/// lattice, each column `(-t Z'/(2 e^b), Z)` with
/// `Z(e0) = K0(kappa t) - (k-1) i pi I0(kappa t)` and `Z(e1) = I0(kappa t)/2`.
pub fn bessel_fundamental_solution(b: Complex64, a: Complex64, t: f64) -> Result<CMatrix> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput("t must be positive".into()));
    }
    let (kappa, k) = kappa_and_chart(b, a);
    let u = kappa * t;
    let (k0v, k1v) = k01(u)?;
    let (i0v, i1v) = (i0(u).value, i1(u).value);
    let shift = I * PI * (k - 1) as f64;
    let z0 = k0v.value - shift * i0v;
    let dz0 = kappa * (-k1v.value - shift * i1v);
    let z1 = i0v * 0.5;
    let dz1 = kappa * i1v * 0.5;
    let f = -t / (2.0 * b.exp());
    Ok(CMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => f * dz0,
        (0, 1) => f * dz1,
        (1, 0) => z0,
        _ => z1,
    }))
}
