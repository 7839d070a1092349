use num_traits::{Float, FromPrimitive, NumAssign};
use std::fmt::Debug;

/// Floating-point scalar used by the generic numerical core
/// (eigensolvers, Cholesky, quadrature, Laguerre polynomials).
pub trait Real: Float + FromPrimitive + NumAssign + Debug + Send + Sync + 'static {
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + NumAssign + Debug + Send + Sync + 'static {}
