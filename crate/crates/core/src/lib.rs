//! Simulation of pre/post-selected weak measurements with a Gaussian pointer,
//! and extraction of the complex weak value from a detector wavefunction as
//! the mixed log-derivative `∂β [∂Q ln Ψ]` at `Q = 0`, `β = 0`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ensemble;
pub mod error;
pub mod expr;
pub mod extraction;
pub mod numerics;
pub mod pointer;
pub mod quantum;
pub mod scenarios;

pub use error::{Error, Result};
pub use numerics::ComplexScalar;
