//! Sample grids in `t` (or `s`).

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Log-uniform grid with `n` points from `t0` to `t1` inclusive.
pub fn geometric(t0: f64, t1: f64, n: usize) -> Result<Vec<f64>> {
    if !(t0 > 0.0) || !(t1 > t0) || !t1.is_finite() {
        return Err(Error::InvalidInput(alloc::format!(
            "geometric grid needs 0 < t0 < t1, got [{t0}, {t1}]"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidInput("grid needs at least 2 points".into()));
    }
    let (l0, l1) = (t0.ln(), t1.ln());
    let mut out: Vec<f64> = (0..n)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
        .collect();
    out[0] = t0;
    out[n - 1] = t1;
    Ok(out)
}

/// Uniform grid with `n` points from `a` to `b` inclusive.
pub fn linear(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(b > a) || !a.is_finite() || !b.is_finite() || n < 2 {
        return Err(Error::InvalidInput(alloc::format!(
            "linear grid needs a < b and n >= 2, got [{a}, {b}] with {n}"
        )));
    }
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect())
}

/// Index where the tail half of a grid of length `n` starts.
pub fn tail_start(n: usize) -> usize {
    n / 2
}
