//! Small dense and tridiagonal linear algebra, generic over [`Real`](crate::Real).

mod cholesky;
mod matrix;
mod symmetric;
mod tridiag;

pub use cholesky::Cholesky;
pub use matrix::Matrix;
pub use symmetric::{symmetric_eigenvalues, tridiagonalize};
pub use tridiag::SymTridiagonal;
