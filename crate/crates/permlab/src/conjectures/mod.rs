//! Checkers for the permanent conjectures: each evaluates one named
//! inequality on concrete matrices and returns a [`report::ConjectureReport`].
//!
//! Every checker validates its preconditions (PSD certificates, matching
//! orders) before computing anything, and reports over exact scalars carry
//! zero error radius so a violation verdict is a proof.

pub mod blocks;
pub mod classical;
pub mod hadamard;
pub mod maximizer;
pub mod report;
pub mod spectral;
pub mod tensor;
pub mod unitary;

pub use report::{CheckerName, ConjectureReport, InputSummary, Reported, Verdict};

use crate::error::{Error, Result};
use crate::matrix::factor::psd_status;
use crate::matrix::SquareMatrix;
use crate::scalar::{CyclotomicNumber, GaussianRational, Scalar, SignDecision};

/// Require a certified PSD status; indefinite and uncertifiable inputs are
/// both rejected so no checker ever runs outside its hypothesis.
pub(crate) fn require_psd<T: Scalar>(a: &SquareMatrix<T>) -> Result<()> {
    match psd_status(a)? {
        SignDecision::Negative => Err(Error::NotPsd(
            "matrix has a certified negative leading principal minor".to_string(),
        )),
        SignDecision::Inconclusive => Err(Error::NotPsd(
            "positive semidefiniteness could not be certified at this precision".to_string(),
        )),
        _ => Ok(()),
    }
}

/// Lift a Gaussian-rational matrix into `T` exactly, failing if `T`
/// cannot represent some entry (e.g. a complex entry into a real field).
pub(crate) fn lift_gaussian_matrix<T: Scalar>(
    m: &SquareMatrix<GaussianRational>,
) -> Result<SquareMatrix<T>> {
    m.try_map(|g| T::from_cyclotomic(&CyclotomicNumber::from_gaussian(g)))
}
