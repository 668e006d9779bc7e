//! Closed-form paths for curves of genus `g >= 1`.
//!
//! For a fundamental solution `(1 + (2g-2)/z ln t N) A` with
//! `A = [[a, a tau_inf / 2 pi i], [1, tau0 / 2 pi i]]` and
//! `s = (2g-2) ln t / |z|`, `e^{i theta} = conj(z)/|z|`, the ratio
//! `Z(O_p)/Z(O_X)` is the Mobius image
//! `tau(s) = (a e^{i theta} s tau_inf + tau0) / (a e^{i theta} s + 1)`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cmath::{c64, is_finite, I};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::EULER_GAMMA;

pub const TWO_STEP_FILTRATION: &str = "two-step filtration 0 ⊂ torsion ⊂ all";

/// `tau(s) = (n1 s + n0) / (d1 s + d0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub n1: Complex64,
    pub n0: Complex64,
    pub d1: Complex64,
    pub d0: Complex64,
}

impl Mobius {
    pub fn eval(&self, s: f64) -> Result<Complex64> {
        let den = self.d1 * s + self.d0;
        if den.norm() < 1e-12 {
            return Err(Error::SingularPath(format!("pole of tau at s = {s}")));
        }
        Ok((self.n1 * s + self.n0) / den)
    }

    /// `Im tau(s) |den(s)|^2` as a real quadratic `c2 s^2 + c1 s + c0`.
    pub fn im_numerator(&self) -> [f64; 3] {
        let c2 = (self.n1 * self.d1.conj()).im;
        let c1 = (self.n1 * self.d0.conj() + self.n0 * self.d1.conj()).im;
        let c0 = (self.n0 * self.d0.conj()).im;
        [c2, c1, c0]
    }

    /// Real parameter where the denominator vanishes, if any.
    pub fn real_pole(&self) -> Option<f64> {
        if self.d1.norm() == 0.0 {
            return None;
        }
        let s = -self.d0 / self.d1;
        (s.im.abs() <= 1e-12 * s.norm().max(1.0)).then_some(s.re)
    }

    /// Smallest value of the quadratic `im_numerator` on `[lo, hi]`.
    pub fn min_im_numerator(&self, lo: f64, hi: f64) -> f64 {
        let [c2, c1, c0] = self.im_numerator();
        let q = |s: f64| (c2 * s + c1) * s + c0;
        let mut m = q(lo).min(q(hi));
        if c2 > 0.0 {
            let v = -c1 / (2.0 * c2);
            if v > lo && v < hi {
                m = m.min(q(v));
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HgPath {
    pub g: u32,
    pub theta: f64,
    pub a_param: Complex64,
    pub tau0: Complex64,
    pub tau_inf: Complex64,
    pub samples: Vec<(f64, Complex64)>,
    /// `Im tau > 0` on the whole parameter interval, certified exactly.
    pub lifts: bool,
    /// `Im tau > 0` at every grid sample.
    pub lifts_on_grid: bool,
    /// `|tau(s_max) - tau_inf| < 10 / s_max`.
    pub converges_to_tau_inf: bool,
    /// The limit is not a point of the upper half plane.
    pub limit_is_boundary: bool,
    pub filtration: Option<&'static str>,
}

impl HgPath {
    /// Running conjunction of `Im tau > 0`, for traces.
    pub fn lifts_so_far(&self) -> Vec<bool> {
        let mut ok = true;
        self.samples
            .iter()
            .map(|(_, tau)| {
                ok = ok && tau.im > 0.0;
                ok
            })
            .collect()
    }
}

fn check_grid(s_grid: &[f64]) -> Result<()> {
    if s_grid.is_empty() {
        return Err(Error::InvalidInput("s grid is empty".into()));
    }
    if s_grid.iter().any(|&s| !(s >= 0.0) || !s.is_finite()) {
        return Err(Error::InvalidInput("s grid must lie in [0, inf)".into()));
    }
    if s_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("s grid must be increasing".into()));
    }
    Ok(())
}

fn sample(m: &Mobius, g: u32, s_grid: &[f64]) -> Result<Vec<(f64, Complex64)>> {
    let lo = s_grid[0];
    let hi = s_grid[s_grid.len() - 1];
    if g >= 2 {
        if let Some(p) = m.real_pole() {
            if p >= lo && p <= hi {
                return Err(Error::SingularPath(format!("tau passes through infinity at s = {p}")));
            }
        }
    }
    s_grid
        .iter()
        .map(|&s| {
            // g = 1: the equation is trivial and every solution is constant
            let se = if g >= 2 { s } else { 0.0 };
            m.eval(se).map(|tau| (s, tau))
        })
        .collect()
}

fn build(
    g: u32,
    theta: f64,
    a_param: Complex64,
    tau0: Complex64,
    tau_inf: Complex64,
    m: Mobius,
    s_grid: &[f64],
) -> Result<HgPath> {
    if g == 0 {
        return Err(Error::InvalidInput("curve paths need genus >= 1".into()));
    }
    check_grid(s_grid)?;
    let samples = sample(&m, g, s_grid)?;
    let lifts_on_grid = samples.iter().all(|(_, t)| t.im > 0.0);
    let (lo, hi) = (s_grid[0], s_grid[s_grid.len() - 1]);
    let lifts = if g >= 2 {
        lifts_on_grid && m.min_im_numerator(lo, hi) > 0.0
    } else {
        lifts_on_grid
    };
    let (s_max, tau_last) = samples[samples.len() - 1];
    let converges_to_tau_inf = s_max > 0.0 && (tau_last - tau_inf).norm() < 10.0 / s_max;
    Ok(HgPath {
        g,
        theta,
        a_param,
        tau0,
        tau_inf,
        samples,
        lifts,
        lifts_on_grid,
        converges_to_tau_inf,
        limit_is_boundary: !(tau_inf.im > 0.0),
        filtration: None,
    })
}

fn generic_mobius(theta: f64, a: Complex64, tau0: Complex64, tau_inf: Complex64) -> Mobius {
    let ae = a * c64(theta.cos(), theta.sin());
    Mobius {
        n1: ae * tau_inf,
        n0: tau0,
        d1: ae,
        d0: c64(1.0, 0.0),
    }
}

/// `tau(s)` for given `a`, `tau0`, `tau_inf`.
pub fn path_tau(
    g: u32,
    theta: f64,
    a_param: Complex64,
    tau0: Complex64,
    tau_inf: Complex64,
    s_grid: &[f64],
) -> Result<HgPath> {
    if !is_finite(a_param) || !is_finite(tau0) || !is_finite(tau_inf) || !theta.is_finite() {
        return Err(Error::InvalidInput("path parameters must be finite".into()));
    }
    let m = generic_mobius(theta, a_param, tau0, tau_inf);
    build(g, theta, a_param, tau0, tau_inf, m, s_grid)
}

/// Distance from `p` to the segment `[a, b]`.
pub fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let u = ((p - a) * d.conj()).re / l2;
    (p - (a + d * u.clamp(0.0, 1.0))).norm()
}

/// Tolerance for samples of the safe path to lie on `[tau0, tau_inf]`.
pub const SEGMENT_TOL: f64 = 1e-10;

/// The path with `a = e^{-i theta}`, which runs along `[tau0, tau_inf]`.
pub fn safe_path(g: u32, theta: f64, tau0: Complex64, tau_inf: Complex64, s_grid: &[f64]) -> Result<HgPath> {
    if !(tau0.im > 0.0) || !(tau_inf.im > 0.0) {
        return Err(Error::InvalidInput(
            "safe path needs tau0 and tau_inf in the upper half plane".into(),
        ));
    }
    let a = c64(theta.cos(), -theta.sin());
    let path = path_tau(g, theta, a, tau0, tau_inf, s_grid)?;
    let scale = tau0.norm().max(tau_inf.norm()).max(1.0);
    for &(s, tau) in &path.samples {
        if segment_distance(tau, tau0, tau_inf) > SEGMENT_TOL * scale {
            return Err(Error::Internal(format!("safe path leaves the segment at s = {s}")));
        }
    }
    if !path.lifts {
        return Err(Error::Internal("safe path does not lift".into()));
    }
    Ok(path)
}

/// `tau(s) = 2 pi i / (e^{i theta} s + 2(g-1) C_eu)` from the Gamma-class solution.
pub fn canonical_path(g: u32, theta: f64, s_grid: &[f64]) -> Result<HgPath> {
    if g < 2 {
        return Err(Error::InvalidInput("canonical path needs genus >= 2".into()));
    }
    let c = 2.0 * (g - 1) as f64 * EULER_GAMMA;
    let m = Mobius {
        n1: c64(0.0, 0.0),
        n0: c64(0.0, 2.0 * PI),
        d1: c64(theta.cos(), theta.sin()),
        d0: c64(c, 0.0),
    };
    let mut p = build(
        g,
        theta,
        c64(1.0 / c, 0.0),
        c64(0.0, 2.0 * PI / c),
        c64(0.0, 0.0),
        m,
        s_grid,
    )?;
    p.filtration = Some(TWO_STEP_FILTRATION);
    Ok(p)
}

/// `e^{i theta} = conj(z)/|z|`.
pub fn theta_from_z(z: Complex64) -> f64 {
    -z.im.atan2(z.re)
}

/// `s = (2g - 2) ln t / |z|`.
pub fn s_from_t(g: u32, z: Complex64, t: f64) -> f64 {
    (2.0 * g as f64 - 2.0) * t.ln() / z.norm()
}

/// `A = [[a, a tau_inf / 2 pi i], [1, tau0 / 2 pi i]]`.
pub fn matrix_for_path(a: Complex64, tau0: Complex64, tau_inf: Complex64) -> CMatrix {
    let tpi = I * (2.0 * PI);
    CMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => a,
        (0, 1) => a * tau_inf / tpi,
        (1, 0) => c64(1.0, 0.0),
        _ => tau0 / tpi,
    })
}

/// `(Z(O_X), Z(O_p))` for `Phi_t = (1 + (2g-2)/z ln t N) A`.
pub fn hg_central_charges(g: u32, z: Complex64, a: &CMatrix, t: f64) -> Result<(Complex64, Complex64)> {
    if a.n() != 2 {
        return Err(Error::InvalidInput("A must be 2x2".into()));
    }
    if !(t > 0.0) || z.norm() == 0.0 {
        return Err(Error::InvalidInput("need t > 0 and z != 0".into()));
    }
    let det = a.det();
    if !(det.norm() > 1e-14 * a.norm_fro() * a.norm_fro()) {
        return Err(Error::InvalidInput("A must be invertible".into()));
    }
    let c = (2.0 * g as f64 - 2.0) * t.ln() / z;
    // second row of (1 + c N) A
    let row = [c * a[(0, 0)] + a[(1, 0)], c * a[(0, 1)] + a[(1, 1)]];
    let z_x = row[0];
    let z_p = row[1] * I * (2.0 * PI);
    if z_x.norm() == 0.0 {
        return Err(Error::SingularPath("Z(O_X) = 0, tau is undefined".into()));
    }
    Ok((z_x, z_p))
}

/// First `s >= 0` where `Im tau(s) <= 0`, if the path ever leaves the upper
/// half plane (including through a pole).
pub fn first_exit(theta: f64, a: Complex64, tau0: Complex64, tau_inf: Complex64) -> Option<f64> {
    let m = generic_mobius(theta, a, tau0, tau_inf);
    if let Some(p) = m.real_pole() {
        if p >= 0.0 {
            return Some(p);
        }
    }
    let [c2, c1, c0] = m.im_numerator();
    if c0 <= 0.0 {
        return Some(0.0);
    }
    if c2 < 0.0 || (c2 == 0.0 && c1 < 0.0) {
        // q eventually negative
        return Some(smallest_positive_root(c2, c1, c0).unwrap_or(0.0));
    }
    if c2 > 0.0 && c1 < 0.0 && c1 * c1 >= 4.0 * c2 * c0 {
        return smallest_positive_root(c2, c1, c0);
    }
    None
}

fn smallest_positive_root(c2: f64, c1: f64, c0: f64) -> Option<f64> {
    if c2 == 0.0 {
        return (c1 != 0.0).then(|| -c0 / c1).filter(|&s| s >= 0.0);
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return None;
    }
    let r = disc.sqrt();
    let mut roots = [(-c1 - r) / (2.0 * c2), (-c1 + r) / (2.0 * c2)];
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    roots.into_iter().find(|&s| s >= 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::linear;

    #[test]
    fn endpoints_and_limit() {
        let (t0, ti) = (c64(0.3, 1.0), c64(-1.0, 2.0));
        let p = path_tau(2, 0.4, c64(0.7, 0.2), t0, ti, &[0.0, 1.0, 1e6]).unwrap();
        assert_eq!(p.samples[0].1, t0);
        assert!((p.samples[2].1 - ti).norm() < 1e-4);
        assert!(p.converges_to_tau_inf);
    }

    #[test]
    fn generalized_circle() {
        let p = path_tau(
            3,
            -0.5,
            c64(0.2, 1.3),
            c64(0.5, 0.5),
            c64(2.0, 1.0),
            &[0.0, 0.3, 1.7, 9.0],
        )
        .unwrap();
        let z: Vec<Complex64> = p.samples.iter().map(|x| x.1).collect();
        let cr = (z[0] - z[2]) * (z[1] - z[3]) / ((z[0] - z[3]) * (z[1] - z[2]));
        assert!(cr.im.abs() < 1e-8 * cr.norm());
    }

    #[test]
    fn safe_path_examples() {
        let s = linear(0.0, 50.0, 200).unwrap();
        let p = safe_path(2, 0.7, I, c64(1.0, 2.0), &s).unwrap();
        assert!(p.lifts);
        let d: Vec<f64> = p.samples.iter().map(|x| (x.1 - c64(1.0, 2.0)).norm()).collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]));
        let c = safe_path(2, 0.7, I, I, &s).unwrap();
        assert!(c.samples.iter().all(|x| (x.1 - I).norm() < 1e-15));
        assert!(safe_path(2, 0.0, c64(0.0, -1.0), I, &s).is_err());
    }

    #[test]
    fn canonical_examples() {
        let p = canonical_path(2, 0.0, &[0.0, 1e6]).unwrap();
        assert!((p.samples[0].1 - c64(0.0, PI / EULER_GAMMA)).norm() < 1e-12);
        assert!(p.samples[1].1.norm() < 1e-5);
        assert!(p.lifts && p.limit_is_boundary);
        assert_eq!(p.filtration, Some(TWO_STEP_FILTRATION));
        let s = linear(0.0, 20.0, 100).unwrap();
        assert!(!canonical_path(2, 2.0, &s).unwrap().lifts);
        assert!(canonical_path(1, 0.0, &s).is_err());
    }

    #[test]
    fn charges_match_mobius() {
        let (a, t0, ti) = (c64(0.4, -0.3), c64(0.1, 0.8), c64(-0.6, 1.5));
        let m = matrix_for_path(a, t0, ti);
        let z = c64(1.0, 0.0);
        for t in [1.0, 2.5, 40.0] {
            let (zx, zp) = hg_central_charges(2, z, &m, t).unwrap();
            let s = s_from_t(2, z, t);
            let p = path_tau(2, theta_from_z(z), a, t0, ti, &[s]).unwrap();
            assert!((zp / zx - p.samples[0].1).norm() < 1e-10);
        }
        let (zx, zp) = hg_central_charges(2, c64(0.3, 0.9), &m, 1.0).unwrap();
        assert!((zp / zx - t0).norm() < 1e-15);
    }

    #[test]
    fn canonical_matrix_gives_canonical_path() {
        let g = 3;
        let c = 2.0 * (g - 1) as f64 * EULER_GAMMA;
        let a = CMatrix::real2(1.0, 0.0, c, 1.0);
        let z = c64(0.8, -0.6);
        for t in [1.0, 3.0, 100.0] {
            let (zx, zp) = hg_central_charges(g, z, &a, t).unwrap();
            let s = s_from_t(g, z, t);
            let p = canonical_path(g, theta_from_z(z), &[s]).unwrap();
            assert!((zp / zx - p.samples[0].1).norm() < 1e-10);
        }
    }

    #[test]
    fn genus_one_is_constant() {
        let p = path_tau(1, 0.3, c64(2.0, 1.0), c64(0.2, 0.5), c64(3.0, 3.0), &[0.0, 5.0, 100.0]).unwrap();
        assert!(p.samples.iter().all(|x| x.1 == c64(0.2, 0.5)));
        let m = matrix_for_path(c64(2.0, 1.0), c64(0.2, 0.5), c64(3.0, 3.0));
        let (zx, zp) = hg_central_charges(1, c64(1.0, 0.0), &m, 50.0).unwrap();
        assert!((zp / zx - c64(0.2, 0.5)).norm() < 1e-14);
    }

    #[test]
    fn dip_between_samples_is_caught() {
        // a far from e^{-i theta}: the circle leaves H between coarse samples
        let (t0, ti) = (c64(0.0, 1.0), c64(-3.0, 0.2));
        let a = c64(0.0, 1.0);
        let exit = first_exit(0.0, a, t0, ti).expect("leaves H");
        let p = path_tau(2, 0.0, a, t0, ti, &[0.0, 1e3]).unwrap();
        assert!(exit < 1e3);
        assert!(!p.lifts);
    }

    #[test]
    fn pole_is_singular() {
        // a e^{i theta} = -1: pole at s = 1
        assert!(matches!(
            path_tau(2, 0.0, c64(-1.0, 0.0), I, I * 2.0, &[0.0, 1.0]),
            Err(Error::SingularPath(_))
        ));
        assert!(matches!(
            path_tau(2, 0.0, c64(-1.0, 0.0), I, I * 2.0, &[0.0, 0.5, 2.0]),
            Err(Error::SingularPath(_))
        ));
    }
}
