//! Special functions: generalized Laguerre polynomials and roots, Bessel functions of the
//! first kind with their derivatives and zeros, normalized Fourier–Bessel functions.

mod bessel;
mod laguerre;
mod zeros;

pub use bessel::{bessel_j, bessel_j_deriv};
pub use laguerre::{laguerre_deriv, laguerre_eval, laguerre_recurrence, laguerre_roots, LaguerreParams};
pub use zeros::{bessel_zero, bessel_zeros, fourier_bessel, BesselZeroTable};
