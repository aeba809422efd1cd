//! Numerical workbench for the twisted fourth moment of the Riemann zeta
//! function and the quadratic divisor problem.
//!
//! Every main-term formula is paired with an independent oracle (direct
//! quadrature, brute-force enumeration or an exact identity) so that the two
//! can be compared at desk scale.

pub mod arith;
pub mod divisor;
pub mod error;
pub mod moments;
pub mod quad;
pub mod smoothing;
pub mod specialfn;
pub mod verify;

pub use error::{Error, Result};

/// Complex point used for every evaluation variable and shift.
pub type C64 = num_complex::Complex64;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
