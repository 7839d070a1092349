//! Laguerre β-corners process numerics.
//!
//! * [`specfun`] — Laguerre polynomials/roots, Bessel functions and zeros.
//! * [`ensembles`] — finite-β samplers and the joint density.
//! * [`zero_temp`] — the β→∞ Gaussian process: crystal roots, jump kernels, dual
//!   polynomials, covariance engine and exact sampler.
//! * [`hard_edge`] — Bessel random walk, polymer covariances and the hard-edge limit.
//!
//! The linear-algebra, quadrature and Laguerre layers are generic over [`Real`]; the
//! stochastic and Bessel layers are fixed to `f64`.

pub mod ensembles;
pub mod error;
pub mod export;
pub mod hard_edge;
pub mod linalg;
pub mod quad;
pub mod real;
pub mod rng;
pub mod specfun;
pub mod stats;
pub mod zero_temp;

pub use error::{Error, Result};
pub use real::Real;

/// Library version, embedded in every exported artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Matrix64 = linalg::Matrix<f64>;
pub type SymTridiagonal64 = linalg::SymTridiagonal<f64>;
pub type Cholesky64 = linalg::Cholesky<f64>;
pub type GaussKronrod64 = quad::GaussKronrod<f64>;
