//! Dormand–Prince 5(4) for linear matrix ODEs `Phi' = A(t) Phi`.
//!
//! Linearity lets the integrator renormalise the state whenever it grows
//! past [`OdeOptions::gauge_threshold`]; the discarded magnitude is carried
//! as a natural-log scale, so the true solution is `exp(log_scale) * phi`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    /// Absolute tolerance, relative to the largest entry of the state.
    pub atol_rel: f64,
    pub max_steps: usize,
    pub gauge_threshold: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol_rel: 1e-14,
            max_steps: 2_000_000,
            gauge_threshold: 1e150,
        }
    }
}

/// A matrix with a separately tracked exponential scale.
#[derive(Clone, Debug)]
pub struct Gauged {
    pub phi: CMatrix,
    pub log_scale: f64,
}

impl Gauged {
    /// The unscaled matrix; overflows for large `log_scale`.
    pub fn value(&self) -> CMatrix {
        self.phi.scale_re(self.log_scale.exp())
    }
}

#[derive(Clone, Debug, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rescalings: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b_hat
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn comb(base: &CMatrix, h: f64, terms: &[(f64, &CMatrix)]) -> CMatrix {
    let mut out = base.clone();
    for &(c, k) in terms {
        if c != 0.0 {
            out = &out + &k.scale_re(h * c);
        }
    }
    out
}

/// Integrates `Phi' = A(t) Phi` from `(t0, y0)` and samples at every point of `grid`.
///
/// The grid must be monotone in one direction starting at or beyond `t0`;
/// integration runs backward when it decreases.
pub fn integrate_linear<F>(
    a: F,
    t0: f64,
    y0: &CMatrix,
    grid: &[f64],
    opts: &OdeOptions,
) -> Result<(Vec<Gauged>, OdeStats)>
where
    F: Fn(f64) -> CMatrix,
{
    if !y0.is_finite() || !t0.is_finite() {
        return Err(Error::InvalidInput("ode: non-finite initial data".into()));
    }
    let mut stats = OdeStats::default();
    let mut out = Vec::with_capacity(grid.len());
    let Some(&last) = grid.last() else {
        return Ok((out, stats));
    };
    let dir = if last >= t0 { 1.0 } else { -1.0 };
    for w in grid.windows(2) {
        if (w[1] - w[0]) * dir < 0.0 {
            return Err(Error::InvalidInput("ode: grid is not monotone".into()));
        }
    }
    if (grid[0] - t0) * dir < 0.0 {
        return Err(Error::InvalidInput("ode: grid starts before t0".into()));
    }

    let mut t = t0;
    let mut y = y0.clone();
    let mut log_scale = 0.0;
    let a0 = a(t0);
    let span = (last - t0).abs();
    let mut h = (0.05 / (crate::linalg::op_norm(&a0) + 1e-3)).min(span.max(1e-6) * 0.1);
    let mut k1 = &a0 * &y;
    let mut steps = 0usize;

    for &target in grid {
        while (target - t) * dir > 0.0 {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::StepUnderflow { t });
            }
            let remaining = (target - t).abs();
            let mut hs = h.min(remaining);
            // avoid a sliver step right before the target
            if remaining - hs < 1e-3 * hs {
                hs = remaining;
            }
            let hh = hs * dir;
            let k2 = &a(t + C2 * hh) * &comb(&y, hh, &[(A21, &k1)]);
            let k3 = &a(t + C3 * hh) * &comb(&y, hh, &[(A31, &k1), (A32, &k2)]);
            let k4 = &a(t + C4 * hh) * &comb(&y, hh, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            let k5 = &a(t + C5 * hh) * &comb(&y, hh, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            let k6 = &a(t + hh) * &comb(&y, hh, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
            let ynew = comb(&y, hh, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let t_new = if hs == remaining { target } else { t + hh };
            let a_new = a(t_new);
            let k7 = &a_new * &ynew;
            let errm = comb(
                &CMatrix::zeros(y.n()),
                hh,
                &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
            );
            let atol = opts.atol_rel * y.max_abs().max(ynew.max_abs());
            let n = y.n();
            let mut acc = 0.0;
            for (i, e) in errm.as_slice().iter().enumerate() {
                let sc = atol + opts.rtol * y.as_slice()[i].norm().max(ynew.as_slice()[i].norm());
                let r = if sc > 0.0 { e.norm() / sc } else { 0.0 };
                acc += r * r;
            }
            let err = (acc / (n * n).max(1) as f64).sqrt();
            if !err.is_finite() || !ynew.is_finite() {
                h = hs * 0.2;
                stats.rejected += 1;
                if h < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepUnderflow { t });
                }
                continue;
            }
            if err <= 1.0 {
                t = t_new;
                y = ynew;
                k1 = k7;
                stats.accepted += 1;
                let m = y.max_abs();
                if m > opts.gauge_threshold || (m < 1.0 / opts.gauge_threshold && m > 0.0) {
                    y = y.scale_re(1.0 / m);
                    k1 = k1.scale_re(1.0 / m);
                    log_scale += m.ln();
                    stats.rescalings += 1;
                }
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // a step clipped to hit the grid says little about the next one
                let clipped = hs < h;
                h = if clipped { h * fac.min(1.0) } else { hs * fac };
            } else {
                stats.rejected += 1;
                h = hs * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                if h < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepUnderflow { t });
                }
            }
        }
        out.push(Gauged {
            phi: y.clone(),
            log_scale,
        });
    }
    Ok((out, stats))
}
