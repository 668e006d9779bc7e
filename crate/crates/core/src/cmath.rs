//! Complex helpers shared across modules.
//!
//! The logarithm used throughout has its branch cut along `i(-inf, 0]`, so
//! arguments live in `(-pi/2, 3pi/2]`.

use core::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Argument in `(-pi/2, 3pi/2]`.
pub fn arg_cut(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -FRAC_PI_2 {
        a + TAU
    } else {
        a
    }
}

/// Logarithm with cut along the negative imaginary axis.
pub fn ln_cut(z: Complex64) -> Complex64 {
    c64(z.norm().ln(), arg_cut(z))
}

pub fn sqrt_cut(z: Complex64) -> Complex64 {
    (ln_cut(z) * 0.5).exp()
}

/// True when `z` lies on the cut `i(-inf, 0]`.
pub fn on_cut(z: Complex64) -> bool {
    z.re == 0.0 && z.im <= 0.0
}

/// Continue a logarithm from `prev_log` (a lift of `log(prev)`) to `next`.
///
/// Returns `None` when the principal argument jump exceeds `max_jump`, in
/// which case the caller has to refine.
pub fn continue_log(prev_log: Complex64, next: Complex64, max_jump: f64) -> Option<Complex64> {
    if next == Complex64::new(0.0, 0.0) || !next.re.is_finite() || !next.im.is_finite() {
        return None;
    }
    let prev = prev_log.exp();
    let ratio = next / prev;
    let jump = ratio.im.atan2(ratio.re);
    if jump.abs() > max_jump {
        return None;
    }
    Some(c64(next.norm().ln(), prev_log.im + jump))
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut x = a % TAU;
    if x <= -PI {
        x += TAU;
    } else if x > PI {
        x -= TAU;
    }
    x
}

pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cut_log_branch() {
        // negative real axis is interior to the cut plane
        let l = ln_cut(c64(-1.0, 0.0));
        assert!((l.im - PI).abs() < 1e-15);
        // just right of the cut
        let l = ln_cut(c64(1e-12, -1.0));
        assert!((l.im + FRAC_PI_2).abs() < 1e-9);
        // just left of the cut
        let l = ln_cut(c64(-1e-12, -1.0));
        assert!((l.im - 3.0 * FRAC_PI_2).abs() < 1e-9);
        assert!(on_cut(c64(0.0, -2.0)));
        assert!(!on_cut(c64(0.0, 2.0)));
    }

    #[test]
    fn continuation_tracks_windings() {
        let mut lg = c64(0.0, 0.0);
        for k in 1..=400 {
            let theta = k as f64 * 0.1;
            lg = continue_log(lg, c64(theta.cos(), theta.sin()), FRAC_PI_2).unwrap();
        }
        assert!((lg.im - 40.0).abs() < 1e-12);
        assert!(continue_log(c64(0.0, 0.0), c64(-1.0, 0.0), FRAC_PI_2).is_none());
    }
}
