//! Seeded search for the maximum of `per(U* A U)` over unitary `U`, with
//! the certified spectral bound `per(U* A U) <= (1/n) sum lambda_i^n`.

use nalgebra::{Complex, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::matrix::eigen::eigenvalues_hermitian;
use crate::matrix::SquareMatrix;
use crate::permanent::per_ryser;
use crate::sampling::{haar_unitary, random_skew_hermitian};
use crate::scalar::{ApproxComplex, Scalar, DEFAULT_PRECISION};

use super::report::{CheckerName, ConjectureReport, InputSummary, Reported};

/// Smallest refinement step; refinement stops below this.
const MIN_STEP: f64 = 1e-8;

pub struct UnitaryMaxResult {
    /// Certified best-found value against the spectral bound.
    pub report: ConjectureReport,
    /// Float value of the best `per(U* A U)` seen.
    pub best_value: f64,
    /// Diagonal of the best `U* A U`, as `(re, im)` pairs.
    pub best_diagonal: Vec<(f64, f64)>,
    /// Max minus min of the diagonal real parts; zero would mean the
    /// equal-diagonal guess held at the optimum found.
    pub diagonal_spread: f64,
    /// Float objective evaluations spent.
    pub evaluations: usize,
}

/// Maximize `per(U* A U)` over unitaries by Haar sampling followed by
/// Cayley refinement along random skew-Hermitian directions (step halved
/// on failure).  The certificate re-evaluates the winner in ball
/// arithmetic and compares it to `(1/n) sum lambda_i^n`.
pub fn max_per_unitary<T: Scalar>(
    a: &SquareMatrix<T>,
    budget: usize,
    seed: u64,
) -> Result<UnitaryMaxResult> {
    let n = a.size();
    if n > 12 {
        return Err(Error::SizeGuard(format!(
            "unitary search is limited to n <= 12, got {n}"
        )));
    }
    if budget == 0 {
        return Err(Error::Invalid("search budget must be positive".to_string()));
    }
    super::require_psd(a)?;

    let af = DMatrix::from_fn(n, n, |i, j| {
        let e = a.at(i, j).embed(DEFAULT_PRECISION);
        Complex::new(e.re_f64(), e.im_f64())
    });
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut evaluations = 0usize;

    let mut best_u = DMatrix::<Complex<f64>>::identity(n, n);
    let mut best_value = objective(&af, &best_u);
    evaluations += 1;

    let sampling_budget = (budget - 1) / 2;
    for _ in 0..sampling_budget {
        let u = haar_unitary(&mut rng, n);
        let value = objective(&af, &u);
        evaluations += 1;
        if value > best_value {
            best_value = value;
            best_u = u;
        }
    }

    let mut step = 0.5;
    while evaluations < budget && step >= MIN_STEP {
        let s = random_skew_hermitian(&mut rng, n, step);
        let Ok(rotation) = crate::sampling::cayley_unitary(&s) else {
            step *= 0.5;
            continue;
        };
        let u = &rotation * &best_u;
        let value = objective(&af, &u);
        evaluations += 1;
        if value > best_value {
            best_value = value;
            best_u = u;
        } else {
            step *= 0.5;
        }
    }

    // certify the winner in ball arithmetic
    let u_exactified =
        SquareMatrix::from_fn(n, |i, j| {
            ApproxComplex::from_f64s(best_u[(i, j)].re, best_u[(i, j)].im, DEFAULT_PRECISION)
        });
    let conjugated = u_exactified
        .conj_transpose()
        .matmul(&a.embed(DEFAULT_PRECISION).matmul(&u_exactified)?)?;
    let certified = per_ryser(&conjugated)?.value;

    let spectrum = eigenvalues_hermitian(a, DEFAULT_PRECISION)?;
    let mut bound = 0.0f64;
    let mut bound_err = 0.0f64;
    for &lambda in &spectrum.values {
        bound += lambda.powi(n as i32);
        bound_err +=
            n as f64 * (lambda.abs() + spectrum.bound).powi(n as i32 - 1) * spectrum.bound;
    }
    bound /= n as f64;
    bound_err = bound_err / n as f64 * (1.0 + 1e-12) + f64::MIN_POSITIVE;

    let defect = unitarity_defect(&best_u);
    let diagonal: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let d = conjugated.at(i, i).embed(DEFAULT_PRECISION);
            (d.re_f64(), d.im_f64())
        })
        .collect();
    let spread = diagonal
        .iter()
        .map(|d| d.0)
        .fold(f64::NEG_INFINITY, f64::max)
        - diagonal.iter().map(|d| d.0).fold(f64::INFINITY, f64::min);

    let report = ConjectureReport::from_certified(
        CheckerName::MaxPerUnitary,
        InputSummary::of_matrix(a),
        Reported::from_scalar(&certified),
        Reported::from_certified(bound, bound_err),
        false,
    )
    .with_witness(format!(
        "diag(U* A U) = {diagonal:?}; unitarity defect = {defect:.3e}"
    ));

    Ok(UnitaryMaxResult {
        report,
        best_value,
        best_diagonal: diagonal,
        diagonal_spread: spread,
        evaluations,
    })
}

fn objective(af: &DMatrix<Complex<f64>>, u: &DMatrix<Complex<f64>>) -> f64 {
    let b = u.adjoint() * af * u;
    super::maximizer::per_f64(&b).re
}

fn unitarity_defect(u: &DMatrix<Complex<f64>>) -> f64 {
    let n = u.nrows();
    let gram = u.adjoint() * u;
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((gram[(i, j)] - Complex::new(target, 0.0)).norm());
        }
    }
    defect
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::psd_gram;
    use crate::scalar::{rat, GaussianRational, Rational};

    use super::super::report::Verdict;

    #[test]
    fn identity_objective_is_constantly_one() {
        let a = SquareMatrix::<GaussianRational>::identity(3);
        let result = max_per_unitary(&a, 40, 3).unwrap();
        assert!((result.best_value - 1.0).abs() < 1e-9);
        assert!((result.report.lhs.approx - 1.0).abs() < 1e-6);
        assert_ne!(result.report.verdict, Verdict::Violated);
        assert!(result.diagonal_spread < 1e-9);
    }

    #[test]
    fn rank_one_two_by_two_respects_the_bound() {
        // per(U* diag(2,0) U) = 8|u_11 u_21|^2 <= 2 = (1/2)(2^2 + 0^2)
        let a = SquareMatrix::from_fn(2, |i, j| {
            if i == 0 && j == 0 {
                rat(2, 1)
            } else {
                rat(0, 1)
            }
        });
        let result = max_per_unitary(&a, 300, 9).unwrap();
        assert_ne!(result.report.verdict, Verdict::Violated);
        assert!(result.best_value <= 2.0 + 1e-9);
        // the optimum is well inside the search's reach
        assert!(result.best_value > 1.0, "found {}", result.best_value);
    }

    #[test]
    fn random_psd_never_beats_the_bound() {
        let mut rng = ChaCha20Rng::seed_from_u64(55);
        for _ in 0..2 {
            let a = psd_gram(&mut rng, 3, 3, 2);
            let result = max_per_unitary(&a, 120, 7).unwrap();
            assert_ne!(result.report.verdict, Verdict::Violated);
            assert!(result.evaluations <= 120);
        }
    }

    #[test]
    fn zero_budget_is_rejected() {
        let a = SquareMatrix::<Rational>::identity(2);
        assert!(max_per_unitary(&a, 0, 1).is_err());
    }
}
