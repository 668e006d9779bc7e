//! Modified Bessel functions `I0`, `I1`, `K0`, `K1` of complex argument.
//!
//! `K` uses the principal branch with the cut along `i(-inf, 0]`. Three
//! regimes are used in the right half plane: power series near the origin,
//! Steed's continued fraction for `K` at moderate `|z|`, and the full
//! Hankel expansion with optimal truncation for large `|z|`. The left half
//! plane is reached through `K0(-x) = K0(x) - i pi I0(x)`.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmath::{arg_cut, c64, is_finite, ln_cut, on_cut, sqrt_cut, I};
use crate::error::{Error, Result};
use crate::EULER_GAMMA;

const EPS: f64 = f64::EPSILON;
/// Below this radius `K` is summed from its power series.
const K_SERIES_RADIUS: f64 = 2.0;
/// Above this radius the Hankel expansion is used.
const ASYMPTOTIC_RADIUS: f64 = 14.0;
/// Sector margin for the truncated asymptotic formulas.
pub const SECTOR_MARGIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Series,
    ContinuedFraction,
    Asymptotic,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselValue {
    pub value: Complex64,
    pub regime: Regime,
    pub est_error: f64,
}

fn zero_c() -> Complex64 {
    c64(0.0, 0.0)
}

/// `sum (z^2/4)^m / (m! (m+nu)!)` times `(z/2)^nu`, for `nu` in {0, 1}; also returns the sum of moduli.
fn i_series(z: Complex64, nu: u32) -> (Complex64, f64) {
    let q = z * z * 0.25;
    let mut term = if nu == 0 { c64(1.0, 0.0) } else { z * 0.5 };
    let mut sum = term;
    let mut abs_sum = term.norm();
    for m in 1..500u32 {
        term = term * q / (m as f64 * (m + nu) as f64);
        sum += term;
        abs_sum += term.norm();
        if term.norm() <= EPS * 0.1 * sum.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    (sum, abs_sum)
}

/// Hankel sums `(sum a_k z^-k, sum (-1)^k a_k z^-k)` with optimal truncation.
fn hankel_sums(nu: u32, z: Complex64, max_terms: Option<usize>) -> (Complex64, Complex64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let mut t = c64(1.0, 0.0);
    let mut plus = t;
    let mut minus = t;
    let mut last = f64::INFINITY;
    let cap = max_terms.unwrap_or(200);
    let mut omitted = 0.0;
    for k in 1..=cap + 1 {
        let next = t * ((mu - ((2 * k - 1) * (2 * k - 1)) as f64) / (8.0 * k as f64)) / z;
        let mag = next.norm();
        if k == cap + 1 || mag >= last || mag <= EPS * 0.1 {
            omitted = mag;
            break;
        }
        t = next;
        last = mag;
        plus += t;
        if k % 2 == 0 {
            minus += t;
        } else {
            minus -= t;
        }
    }
    (plus, minus, omitted)
}

/// Reduces to the closed first quadrant; returns (w, negated, conjugated).
fn first_quadrant(z: Complex64) -> (Complex64, bool, bool) {
    let mut w = z;
    let mut neg = false;
    let mut conj = false;
    if w.re < 0.0 {
        w = -w;
        neg = true;
    }
    if w.im < 0.0 {
        w = w.conj();
        conj = true;
    }
    (w, neg, conj)
}

fn i_nu(z: Complex64, nu: u32) -> BesselValue {
    if z.norm() <= ASYMPTOTIC_RADIUS {
        let (v, abs_sum) = i_series(z, nu);
        let v = if z.im == 0.0 { c64(v.re, 0.0) } else { v };
        return BesselValue {
            value: v,
            regime: Regime::Series,
            est_error: 4.0 * EPS * abs_sum,
        };
    }
    let (w, neg, conj) = first_quadrant(z);
    let (plus, minus, omitted) = hankel_sums(nu, w, None);
    let root = (w * 2.0 * PI).sqrt();
    let sub = if nu == 0 { I } else { -I };
    let ez = w.exp();
    let emz = (-w).exp();
    let mut v = (ez * minus + sub * emz * plus) / root;
    let est = (ez.norm() + emz.norm()) / root.norm() * (omitted + 4.0 * EPS);
    if conj {
        v = v.conj();
    }
    if neg && nu == 1 {
        v = -v;
    }
    if z.im == 0.0 {
        v = c64(v.re, 0.0);
    }
    BesselValue {
        value: v,
        regime: Regime::Asymptotic,
        est_error: est,
    }
}

pub fn i0(z: Complex64) -> BesselValue {
    i_nu(z, 0)
}

/// `I1 = I0'`.
pub fn i1(z: Complex64) -> BesselValue {
    i_nu(z, 1)
}

fn check_k_domain(z: Complex64) -> Result<()> {
    if !is_finite(z) {
        return Err(Error::Domain {
            what: "bessel",
            detail: alloc::format!("non-finite argument {z}"),
        });
    }
    if z.norm() == 0.0 || on_cut(z) {
        return Err(Error::Domain {
            what: "bessel",
            detail: alloc::format!("K0 evaluated at {z}, which lies on the cut i(-inf, 0]"),
        });
    }
    Ok(())
}

/// `(K0, K1)` from the power series; `z` in the cut plane.
fn k_series(z: Complex64) -> (Complex64, Complex64, f64) {
    let q = z * z * 0.25;
    let lg = ln_cut(z) - c64(core::f64::consts::LN_2, 0.0);
    let (i0v, i0abs) = i_series(z, 0);
    let (i1v, i1abs) = i_series(z, 1);
    // K0 = -(ln(z/2) + gamma) I0 + sum h_m q^m / (m!)^2
    let mut term = c64(1.0, 0.0);
    let mut h = 0.0;
    let mut s0 = zero_c();
    // K1 = 1/z + ln(z/2) I1 - (z/4) sum (psi(k+1) + psi(k+2)) q^k / (k! (k+1)!)
    let mut term1 = c64(1.0, 0.0);
    let mut s1 = c64(-2.0 * EULER_GAMMA + 1.0, 0.0);
    let mut abs0 = 0.0;
    let mut h1 = 0.0;
    for m in 1..500u32 {
        let mf = m as f64;
        h += 1.0 / mf;
        term = term * q / (mf * mf);
        s0 += term * h;
        abs0 += (term * h).norm();
        h1 += 1.0 / mf;
        term1 = term1 * q / (mf * (mf + 1.0));
        let psi_sum = -2.0 * EULER_GAMMA + 2.0 * h1 + 1.0 / (mf + 1.0);
        s1 += term1 * psi_sum;
        if term.norm() * h <= EPS * 0.1 * s0.norm().max(1e-300)
            && term1.norm() * psi_sum.abs() <= EPS * 0.1 * s1.norm().max(1e-300)
        {
            break;
        }
    }
    let k0 = -(lg + EULER_GAMMA) * i0v + s0;
    let k1 = z.inv() + lg * i1v - z * 0.25 * s1;
    let err = 4.0 * EPS * ((lg.norm() + 1.0) * (i0abs + i1abs) + abs0 + 1.0);
    (k0, k1, err)
}

/// Steed's continued fraction for `(K0, K1)`, `Re z >= 0`, `|z| >= 2`.
fn k_steed(x: Complex64) -> Result<(Complex64, Complex64)> {
    const MAXIT: usize = 20_000;
    let one = c64(1.0, 0.0);
    let mut b = (one + x) * 2.0;
    let mut d = b.inv();
    let mut h = d;
    let mut delh = d;
    let mut q1 = zero_c();
    let mut q2 = one;
    let a1 = 0.25;
    let mut q = c64(a1, 0.0);
    let mut c = a1;
    let mut a = -a1;
    let mut s = one + q * delh;
    let mut converged = false;
    for i in 2..=MAXIT {
        a -= (2 * (i - 1)) as f64;
        c = -a * c / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += qnew * c;
        b += 2.0;
        d = (b + d * a).inv();
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < EPS * s.norm() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "bessel continued fraction",
            iterations: MAXIT,
        });
    }
    h *= a1;
    let k0 = (c64(PI, 0.0) / (x * 2.0)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    Ok((k0, k1))
}

/// `(K0, K1, est_error, regime)` for `Re z >= 0`.
fn k_right(z: Complex64) -> Result<(Complex64, Complex64, f64, Regime)> {
    let r = z.norm();
    let (mut k0, mut k1, err, regime) = if r <= K_SERIES_RADIUS {
        let (a, b, e) = k_series(z);
        (a, b, e, Regime::Series)
    } else if r <= ASYMPTOTIC_RADIUS {
        let (a, b) = k_steed(z)?;
        (a, b, 64.0 * EPS * a.norm(), Regime::ContinuedFraction)
    } else {
        let pre = (c64(PI, 0.0) / (z * 2.0)).sqrt() * (-z).exp();
        let (p0, _, o0) = hankel_sums(0, z, None);
        let (p1, _, o1) = hankel_sums(1, z, None);
        (
            pre * p0,
            pre * p1,
            pre.norm() * (o0.max(o1) + 4.0 * EPS),
            Regime::Asymptotic,
        )
    };
    if z.im == 0.0 {
        k0.im = 0.0;
        k1.im = 0.0;
    }
    Ok((k0, k1, err, regime))
}

/// `(K0(z), K1(z))` on the cut plane, with a shared error estimate.
pub fn k01(z: Complex64) -> Result<(BesselValue, BesselValue)> {
    check_k_domain(z)?;
    if z.re >= 0.0 {
        let (k0, k1, e, regime) = k_right(z)?;
        let mk = |v| BesselValue {
            value: v,
            regime,
            est_error: e,
        };
        return Ok((mk(k0), mk(k1)));
    }
    // K0(z) = K0(-z) - i pi I0(z),  K1(z) = -K1(-z) + i pi I1(z)
    let (k0m, k1m, e, regime) = k_right(-z)?;
    let a = i0(z);
    let b = i1(z);
    let k0 = k0m - I * PI * a.value;
    let k1 = -k1m + I * PI * b.value;
    let e = e + PI * (a.est_error + b.est_error);
    Ok((
        BesselValue {
            value: k0,
            regime,
            est_error: e,
        },
        BesselValue {
            value: k1,
            regime,
            est_error: e,
        },
    ))
}

pub fn k0(z: Complex64) -> Result<BesselValue> {
    Ok(k01(z)?.0)
}

/// `K1 = -K0'`.
pub fn k1(z: Complex64) -> Result<BesselValue> {
    Ok(k01(z)?.1)
}

/// `K0(z) + i pi I0(z)`, evaluated without cancellation in the left half plane
/// (where it equals `K0(-z)`).
pub fn k0_plus(z: Complex64) -> Result<Complex64> {
    check_k_domain(z)?;
    if z.re < 0.0 {
        let (k, _, _, _) = k_right(-z)?;
        Ok(k)
    } else {
        Ok(k0(z)?.value + I * PI * i0(z).value)
    }
}

/// Derivative of [`k0_plus`]: `-K1(z) + i pi I1(z)`, which is `K1(-z)` for `Re z < 0`.
pub fn k0_plus_prime(z: Complex64) -> Result<Complex64> {
    check_k_domain(z)?;
    if z.re < 0.0 {
        let (_, k1m, _, _) = k_right(-z)?;
        Ok(k1m)
    } else {
        Ok(-k1(z)?.value + I * PI * i1(z).value)
    }
}

fn check_sector(u: Complex64) -> Result<()> {
    let a = arg_cut(u);
    if u.norm() < 10.0 {
        return Err(Error::Domain {
            what: "bessel",
            detail: alloc::format!("asymptotic formula needs |u| >= 10, got {}", u.norm()),
        });
    }
    if !(-core::f64::consts::FRAC_PI_2 + SECTOR_MARGIN..=1.5 * PI - SECTOR_MARGIN).contains(&a) {
        return Err(Error::Domain {
            what: "bessel",
            detail: alloc::format!("arg(u) = {a} is outside the asymptotic sector"),
        });
    }
    Ok(())
}

/// Truncated Hankel expansion of `K0` with `order` correction terms (0..=2).
pub fn asymptotic_k0(u: Complex64, order: usize) -> Result<BesselValue> {
    check_sector(u)?;
    let order = order.min(2);
    let pre = (c64(PI / 2.0, 0.0)).sqrt() / sqrt_cut(u) * (-u).exp();
    let (plus, _, omitted) = hankel_sums(0, u, Some(order));
    Ok(BesselValue {
        value: pre * plus,
        regime: Regime::Asymptotic,
        est_error: pre.norm() * omitted,
    })
}

/// Truncated expansion of `I0` with `order` correction terms (0..=2).
pub fn asymptotic_i0(u: Complex64, order: usize) -> Result<BesselValue> {
    check_sector(u)?;
    let order = order.min(2);
    let root = sqrt_cut(u) * (2.0 * PI).sqrt();
    let (plus, minus, omitted) = hankel_sums(0, u, Some(order));
    let (ez, emz) = (u.exp(), (-u).exp());
    Ok(BesselValue {
        value: (ez * minus + I * emz * plus) / root,
        regime: Regime::Asymptotic,
        est_error: (ez.norm() + emz.norm()) / root.norm() * omitted,
    })
}

/// `g(x) = x K0(x) (K0(x) + i pi I0(x))` on the closed upper half plane.
pub fn g_positivity(x: Complex64) -> Result<Complex64> {
    if x.im < 0.0 || x.norm() == 0.0 || !is_finite(x) {
        return Err(Error::Domain {
            what: "bessel",
            detail: alloc::format!("g needs x != 0 with Im x >= 0, got {x}"),
        });
    }
    Ok(x * k0(x)?.value * k0_plus(x)?)
}
