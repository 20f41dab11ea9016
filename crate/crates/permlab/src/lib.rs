//! Exact and certified-float permanents, generalized matrix functions, and
//! Schur power matrices, plus checkers for a catalogue of permanent
//! inequalities.

pub mod conjectures;
pub mod error;
pub mod gmf;
pub mod matrix;
pub mod perm;
pub mod permanent;
pub mod registry;
pub mod sampling;
pub mod scalar;
pub mod schur;
pub mod search;

pub use error::{Error, Result};
pub use scalar::{
    cyclo_make, zeta, ApproxComplex, CyclotomicNumber, GaussianRational, Rational, Scalar,
    SignDecision, DEFAULT_PRECISION,
};
