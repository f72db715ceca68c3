//! Numeric substrate: scalar algebras, the Hermitian eigensolver, Gaussian
//! moments and finite differences.

mod dual;
mod finite_diff;
mod hermitian;
mod moments;
mod scalar;

pub use dual::{dual_apply, dual_mul, DualBi};
pub use finite_diff::{mixed_fd, DEFAULT_STEP};
pub use hermitian::{eigh, Eigen, HermitianMatrix};
pub use moments::{binomial, factorial, gaussian_moment, MAX_MOMENT};
pub use scalar::{Func, Scalar};

/// Complex scalar used throughout the crate.
pub type ComplexScalar = num_complex::Complex64;
