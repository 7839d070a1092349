//! The hard-edge limit `N → ∞`: the Bessel-∞ random walk, polymer partition-function
//! covariances, the limiting covariance integral and the finite-`N` asymptotic formulas.

mod limit;
mod polymer;
mod walk;

pub use limit::{
    asymptotic_q, covariance_table, hard_edge_root_approx, limit_covariance, limit_integrand, CovarianceEntry,
    CovarianceMethod,
};
pub use polymer::{
    polymer_covariance, polymer_covariance_adaptive, sample_polymer, PolymerConfig, PolymerCovariance, PolymerSampler,
};
pub use walk::{walk_kernel, walk_kernel_integral, walk_step, StepLadder, WalkKernel};
