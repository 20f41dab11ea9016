//! Spectral conjecture checks: permanent-on-top and the Bapat-Sunder
//! per-max equality.

use crate::error::{Error, Result};
use crate::matrix::eigen::eigenvalues_hermitian;
use crate::matrix::SquareMatrix;
use crate::permanent::{per_minor_matrix, permanent};
use crate::scalar::{Scalar, DEFAULT_PRECISION};
use crate::schur::schur_power;

use super::report::{CheckerName, ConjectureReport, InputSummary, Reported, Verdict};
use super::require_psd;

/// Permanent-on-top: `lambda_max(pi(A)) <= per A` for PSD `A`.
/// False in general; the margin is certified so a violation is a theorem
/// about this matrix, not a rounding artifact.
pub fn pot_check<T: Scalar>(a: &SquareMatrix<T>) -> Result<ConjectureReport> {
    require_psd(a)?;
    let summary = schur_power(a)?.spectral_summary()?;
    let lhs = Reported::from_certified(summary.lambda_max.value, summary.lambda_max.err);
    let rhs = Reported::from_scalar(&summary.per_value);
    let report = ConjectureReport::from_certified(
        CheckerName::Pot,
        InputSummary::of_matrix(a),
        lhs,
        rhs,
        false,
    );
    if report.verdict == Verdict::Violated {
        let witness = format!(
            "lambda_max(pi(A)) >= {:.6e} exceeds per A",
            summary.lambda_max.lower()
        );
        return Ok(report.with_witness(witness));
    }
    Ok(report)
}

/// Bapat-Sunder per-max: `per A` equals the largest eigenvalue of the
/// matrix `(a_ij per A(i,j))`.  The minor matrix is checked for
/// Hermitian-ness before any eigenvalue is trusted.
pub fn bapat_sunder_per_max<T: Scalar>(a: &SquareMatrix<T>) -> Result<ConjectureReport> {
    if a.size() < 2 {
        return Err(Error::DimensionMismatch(
            "per-max needs a matrix of order at least 2".to_string(),
        ));
    }
    require_psd(a)?;
    let minors = per_minor_matrix(a)?;
    if !minors.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let spectrum = eigenvalues_hermitian(&minors, DEFAULT_PRECISION)?;
    let per = permanent(a)?.value;
    Ok(ConjectureReport::from_certified(
        CheckerName::BapatSunderPerMax,
        InputSummary::of_matrix(a),
        Reported::from_certified(spectrum.lambda_max(), spectrum.bound),
        Reported::from_scalar(&per),
        true,
    ))
}
