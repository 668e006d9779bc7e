//! Mirror contour integrals for P1.
//!
//! With `w = (kappa t)^2 / 4` the charge of a contour `L` is
//! `(1/2) int_L exp(-(x + w/x)) dx/x`. In `y = ln x` the integrand is
//! `(1/2) exp(-(e^y + w e^{-y}))`, which is what the legs of `C_theta` use.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmath::{c64, is_finite, I};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ContourKind {
    /// Circle around the origin (radius chosen at the saddle scale).
    UnitCircle,
    CTheta {
        theta: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourValue {
    pub value: Complex64,
    /// Change under the last refinement.
    pub est_error: f64,
    /// Integrand evaluations.
    pub evaluations: usize,
    /// `|s|` where each unbounded leg was cut, 0 for the circle.
    pub cutoff: f64,
}

const CUTOFF_REL: f64 = 1e-18;
const MAX_DOUBLINGS: usize = 14;

fn integrand(y: Complex64, w: Complex64) -> Complex64 {
    (-(y.exp() + w * (-y).exp())).exp() * 0.5
}

/// `(1/2) oint exp(-(x + w/x)) dx/x`, which is `i pi I0(kappa t)`.
///
/// The circle has radius `max(1, |kappa t|/2)`; for large `|kappa t|` the
/// unit circle would sum terms much larger than the result.
pub fn skyscraper_charge(kappa: Complex64, t: f64) -> Result<ContourValue> {
    if !(t >= 0.0) || !is_finite(kappa) {
        return Err(Error::InvalidInput(
            "skyscraper contour needs t >= 0 and finite kappa".into(),
        ));
    }
    let u = kappa * t;
    let w = u * u * 0.25;
    let rho = (u.norm() * 0.5).max(1.0);
    let f = |th: f64| {
        let e = c64(th.cos(), th.sin());
        (-(e * rho + w / (e * rho))).exp()
    };
    let sum_n = |n: usize| -> Complex64 {
        let h = 2.0 * PI / n as f64;
        (0..n).map(|j| f(j as f64 * h)).sum::<Complex64>() * h
    };
    let mut n = 32;
    let mut prev = sum_n(n);
    let mut evals = n;
    for _ in 0..MAX_DOUBLINGS {
        n *= 2;
        let cur = sum_n(n);
        evals += n;
        let diff = (cur - prev).norm();
        let scale = cur.norm().max(1e-300);
        prev = cur;
        if diff <= 1e-15 * scale.max(1.0) || diff <= 1e-14 * scale {
            return Ok(ContourValue {
                value: I * 0.5 * cur,
                est_error: 0.5 * diff,
                evaluations: evals,
                cutoff: 0.0,
            });
        }
    }
    Err(Error::NonConvergence {
        what: "skyscraper contour",
        iterations: MAX_DOUBLINGS,
    })
}

/// 20-point Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre_20() -> ([f64; 20], [f64; 20]) {
    const N: usize = 20;
    let mut x = [0.0; N];
    let mut w = [0.0; N];
    for i in 0..N {
        let mut z = (PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=N {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = N as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 2..=N {
                    let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                    q0 = q1;
                    q1 = q2;
                }
                let dq = N as f64 * (z * q1 - q0) / (z * z - 1.0);
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dq * dq);
                break;
            }
        }
    }
    (x, w)
}

/// Composite Gauss-Legendre of `f(s)` on `[a, b]` with `panels` panels.
fn composite_gl(
    f: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    panels: usize,
    gl: &([f64; 20], [f64; 20]),
) -> (Complex64, f64) {
    let h = (b - a) / panels as f64;
    let mut acc = c64(0.0, 0.0);
    let mut abs = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in gl.0.iter().zip(&gl.1) {
            let v = f(mid + 0.5 * h * xi) * (wi * 0.5 * h);
            abs += v.norm();
            acc += v;
        }
    }
    (acc, abs.abs())
}

struct Leg<'a> {
    f: &'a dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
}

fn integrate_legs(legs: &[Leg<'_>]) -> Result<(Complex64, f64, usize)> {
    let gl = gauss_legendre_20();
    let mut panels: Vec<usize> = legs
        .iter()
        .map(|l| ((l.b - l.a).abs().ceil() as usize).max(1))
        .collect();
    let eval = |panels: &[usize]| -> (Complex64, f64) {
        let mut v = c64(0.0, 0.0);
        let mut abs = 0.0;
        for (l, &p) in legs.iter().zip(panels) {
            let (x, a) = composite_gl(l.f, l.a, l.b, p, &gl);
            v += x;
            abs += a;
        }
        (v, abs)
    };
    let (mut prev, _) = eval(&panels);
    let mut evals = panels.iter().sum::<usize>() * 20;
    for _ in 0..MAX_DOUBLINGS {
        for p in panels.iter_mut() {
            *p *= 2;
        }
        let (cur, abs) = eval(&panels);
        evals += panels.iter().sum::<usize>() * 20;
        let diff = (cur - prev).norm();
        prev = cur;
        if diff <= 1e-14 * abs.max(cur.norm()) {
            return Ok((cur, diff, evals));
        }
    }
    Err(Error::NonConvergence {
        what: "line bundle contour",
        iterations: MAX_DOUBLINGS,
    })
}

/// Walks `s` away from `start` in steps of `step` until the integrand falls
/// below `CUTOFF_REL` times the largest value seen.
fn find_cutoff(f: &dyn Fn(f64) -> Complex64, start: f64, step: f64) -> Result<f64> {
    let mut peak = f(start).norm();
    let mut s = start;
    for _ in 0..4000 {
        s += step;
        let v = f(s).norm();
        if !v.is_finite() {
            return Err(Error::Overflow {
                what: "mirror_contour",
                exponent: s,
            });
        }
        peak = peak.max(v);
        if v < CUTOFF_REL * peak || (peak == 0.0 && v == 0.0) {
            return Ok(s);
        }
    }
    Err(Error::Domain {
        what: "mirror_contour",
        detail: format!("integrand does not decay on the leg starting at s = {start}"),
    })
}

/// Convergence of `C_theta` at the `x -> 0` end: `Re(kappa^2 e^{-i theta}) > 0`.
pub fn c_theta_converges(kappa: Complex64, theta: f64) -> bool {
    (kappa * kappa * c64(theta.cos(), -theta.sin())).re > 0.0
}

/// `(1/2) int_{C_theta} exp(-(x + (kappa t)^2/(4x))) dx/x`, which is `K0(kappa t)`
/// for admissible `theta`.
pub fn linebundle_charge(kappa: Complex64, t: f64, theta: f64) -> Result<ContourValue> {
    if !(t > 0.0) || !is_finite(kappa) || !theta.is_finite() {
        return Err(Error::InvalidInput(
            "line bundle contour needs t > 0, finite kappa and theta".into(),
        ));
    }
    let u = kappa * t;
    let w = u * u * 0.25;
    // the leg toward x = 0 decays like exp(-Re(w e^{-i theta}) e^{-s})
    if !((w * c64(theta.cos(), -theta.sin())).re > 0.0) {
        return Err(Error::Domain {
            what: "mirror_contour",
            detail: format!(
                "leg s + i theta (s -> -inf) diverges: Re(kappa^2 t^2 e^(-i theta)) <= 0 for kappa t = {u}, theta = {theta}"
            ),
        });
    }
    let leg0 = move |s: f64| integrand(c64(s, theta), w);
    let leg1 = move |s: f64| integrand(c64(0.0, s), w) * I;
    let leg2 = move |s: f64| integrand(c64(s, 0.0), w);
    let lo = find_cutoff(&leg0, 0.0, -0.25)?;
    let hi = find_cutoff(&leg2, 0.0, 0.25)?;
    let legs = [
        Leg {
            f: &leg0,
            a: lo,
            b: 0.0,
        },
        Leg {
            f: &leg1,
            a: theta,
            b: 0.0,
        },
        Leg {
            f: &leg2,
            a: 0.0,
            b: hi,
        },
    ];
    let legs: Vec<Leg<'_>> = legs.into_iter().filter(|l| l.a != l.b).collect();
    let (value, est_error, evaluations) = integrate_legs(&legs)?;
    Ok(ContourValue {
        value,
        est_error,
        evaluations,
        cutoff: lo.abs().max(hi),
    })
}

/// The angle `2 Im(b - a) - 2 pi (k - 1)` attached to `O(k-1)`; equals `2 arg kappa`.
pub fn natural_theta(b: Complex64, a: Complex64) -> f64 {
    let (_, k) = crate::stab_p1::kappa_and_chart(b, a);
    2.0 * (b - a).im - 2.0 * PI * (k - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::{i0, k0};

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let gl = gauss_legendre_20();
        let s: f64 = gl.1.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let x38: f64 = gl.0.iter().zip(&gl.1).map(|(x, w)| w * x.powi(38)).sum();
        assert!((x38 - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn skyscraper_examples() {
        let z = skyscraper_charge(c64(1.0, 0.0), 0.0).unwrap();
        assert!((z.value - I * PI).norm() < 1e-12);
        for u in [c64(1.0, 0.0), c64(0.0, 2.0), c64(12.0, 5.0)] {
            let z = skyscraper_charge(u, 1.0).unwrap();
            let want = I * PI * i0(u).value;
            assert!((z.value - want).norm() < 1e-11 * want.norm().max(1.0), "{u}");
        }
    }

    #[test]
    fn linebundle_examples() {
        for u in [1.0, 2.0] {
            let z = linebundle_charge(c64(u, 0.0), 1.0, 0.0).unwrap();
            assert!((z.value - k0(c64(u, 0.0)).unwrap().value).norm() < 1e-12);
        }
        let a = linebundle_charge(c64(1.0, 0.0), 1.0, 0.0).unwrap().value;
        let b = linebundle_charge(c64(1.0, 0.0), 1.0, 0.3).unwrap().value;
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn complex_kappa_uses_natural_angle() {
        let (b, a) = (c64(0.2, 1.1), c64(0.0, 0.0));
        let (kappa, _) = crate::stab_p1::kappa_and_chart(b, a);
        let theta = natural_theta(b, a);
        assert!(c_theta_converges(kappa, theta));
        let z = linebundle_charge(kappa, 0.8, theta).unwrap();
        let want = k0(kappa * 0.8).unwrap().value;
        assert!((z.value - want).norm() < 1e-10, "{} vs {want}", z.value);
    }

    #[test]
    fn divergent_leg_is_rejected() {
        // kappa = 2i, theta = 0: Re(kappa^2) < 0
        let e = linebundle_charge(c64(0.0, 2.0), 1.0, 0.0).unwrap_err();
        assert!(matches!(e, Error::Domain { .. }));
        assert!(e.to_string().contains("s -> -inf"));
    }
}
