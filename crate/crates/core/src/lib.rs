//! Exact certification of the explicit `sl(3) ⊂ g2 ⊂ so(7)` embeddings, the
//! octonionic cross product derived from them, and numerical verification of
//! Gibbons-Hawking type constructions of G2 metrics.
//!
//! Algebraic identities are checked over the rationals with zero residual.
//! Metric constructions are checked pointwise with finite-difference stencils
//! and convergence-order studies.

pub mod constructions;
pub mod convergence;
pub mod error;
pub mod fields;
pub mod forms;
pub mod lie;
pub mod linalg;
pub mod octonion;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{lit, Real, Scalar};

/// Exact scalar used for every certification.
pub type Rational = num_rational::BigRational;
pub type ExactMatrix = linalg::Matrix<Rational>;
pub type ExactSubspace = linalg::Subspace<Rational>;
pub type Matrix64 = linalg::Matrix<f64>;
