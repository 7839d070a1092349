//! The β→∞ (zero-temperature) Laguerre corners process.
//!
//! Fluctuations `ξ_{a,k}` around the crystal `l_{a,k}` (roots of `L_k^{(N−k)}`) form a
//! Gaussian array driven by a jump chain on the roots. Its covariance is computed three
//! independent ways: the dual-polynomial spectral formula, inversion of the precision matrix
//! read off the Taylor expansion of the density, and Monte Carlo from the exact sampler.

mod contour;
mod covariance;
mod crystal;
mod dual;
mod kernel;
mod oracle;
mod sampler;

pub use contour::dual_poly_contour;
pub use covariance::{covariance, covariance_matrix, eta_variance, top_level_covariance, InfinityCovariance};
pub use crystal::CrystalTable;
pub use dual::{dual_log_norm, dual_poly_column, dual_poly_monic, dual_poly_normalized, dual_polys, DualPolyTable};
pub use kernel::{apply_dk, diffusion_kernel, diffusion_kernel_spectral, transition_matrix, Kernel};
pub use oracle::{oracle_covariance, precision_matrix, top_level_precision};
pub use sampler::sample_infinity_corners;
