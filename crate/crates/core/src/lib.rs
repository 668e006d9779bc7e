//! Numerical core for quantum-differential-equation paths in spaces of
//! stability conditions.
//!
//! The crate is `no_std` (it only needs `alloc`) and contains the pure
//! numerics: the Gromov–Witten data model and truncated quantum
//! endomorphism, small dense complex linear algebra, modified Bessel
//! functions on the cut plane, an adaptive Runge–Kutta integrator for
//! matrix ODEs, the explicit Bessel chart of `Stab(P1)`, mirror contour
//! integrals, closed-form paths for higher genus curves, the extraction of
//! semiorthogonal-decomposition data from central-charge asymptotics, and
//! lattice mutations.
//!
//! File formats, traces and the command-line driver live in the `stabpath`
//! crate.

#![cfg_attr(not(test), no_std)]
#![cfg_attr(test, allow(unused_imports))]
// `!(x > 0.0)` rejects NaN along with the bad values
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop
)]

extern crate alloc;

pub mod bessel;
pub mod cmath;
pub mod contour;
pub mod curves;
pub mod error;
pub mod grid;
pub mod gw_model;
pub mod linalg;
pub mod mutation;
pub mod ode;
pub mod qde;
pub mod sod;
pub mod stab_p1;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
