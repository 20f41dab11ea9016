//! Checkers built on block structure and matrix powers: per-in-per,
//! Thompson's det-in-det, the Foregger power series for doubly stochastic
//! matrices, and the Drury first-row inequalities.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::factor::det_bareiss;
use crate::matrix::{DoublyStochasticMatrix, PartitionedView, SquareMatrix};
use crate::perm::factorial;
use crate::permanent::{per_partition, permanent};
use crate::scalar::{Rational, Scalar, SignDecision};

use super::report::{CheckerName, ConjectureReport, InputSummary, Verdict};
use super::require_psd;

/// Per-in-per: for PSD `A` of order `m*n` split into an `m x m` array of
/// `n x n` blocks, `per P <= per A` where `P_ij = per A_ij`.  The second
/// report is the proven weakening `per P / n! <= per A`.
pub fn per_in_per<T: Scalar>(
    a: &SquareMatrix<T>,
    m: usize,
    n: usize,
) -> Result<Vec<ConjectureReport>> {
    let view = block_view(a, m, n)?;
    require_psd(a)?;
    let p = per_partition(&view)?;
    let per_p = permanent(&p)?.value;
    let per_a = permanent(a)?.value;
    let inputs = InputSummary::of_matrix(a);
    let main = ConjectureReport::inequality(CheckerName::PerInPer, inputs.clone(), &per_p, &per_a);
    let inv_fact = Rational::new(BigInt::from(1), BigInt::from(factorial(n)));
    let scaled_lhs = per_p.mul(&T::from_rational(&inv_fact));
    let scaled =
        ConjectureReport::inequality(CheckerName::PerInPerScaled, inputs, &scaled_lhs, &per_a);
    Ok(vec![main, scaled])
}

/// Thompson's det-in-det theorem: `det A <= det D` with `D_ij = det A_ij`
/// over the same equal-block partition.
pub fn det_in_det<T: Scalar>(a: &SquareMatrix<T>, m: usize, n: usize) -> Result<ConjectureReport> {
    let view = block_view(a, m, n)?;
    require_psd(a)?;
    let mut dets = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            dets.push(det_bareiss(&view.block(i, j)?)?);
        }
    }
    let d = SquareMatrix::new(m, dets)?;
    let det_d = det_bareiss(&d)?;
    let det_a = det_bareiss(a)?;
    Ok(ConjectureReport::inequality(
        CheckerName::DetInDet,
        InputSummary::of_matrix(a),
        &det_a,
        &det_d,
    ))
}

fn block_view<'a, T: Scalar>(
    a: &'a SquareMatrix<T>,
    m: usize,
    n: usize,
) -> Result<PartitionedView<'a, T>> {
    if m == 0 || n == 0 || a.size() != m * n {
        return Err(Error::DimensionMismatch(format!(
            "order {} is not an {m} x {m} array of {n} x {n} blocks",
            a.size()
        )));
    }
    PartitionedView::new(a, &vec![n; m])
}

/// Permanents of matrix powers of a doubly stochastic matrix, against
/// `per A`, plus the exactly-decided Chang regime flag `1/2 < per A < 1`
/// under which `per(A^k) < per A` is a theorem for every `k >= 2`.
pub struct ForeggerSeries {
    /// One report per `k = 2..=kmax`, in order.
    pub reports: Vec<ConjectureReport>,
    pub chang_regime: bool,
    /// Smallest `k >= 2` with `per(A^k) <= per A`.
    pub first_compressed: Option<usize>,
}

pub fn foregger<T: Scalar>(
    a: &DoublyStochasticMatrix<T>,
    kmax: usize,
) -> Result<ForeggerSeries> {
    if kmax < 2 {
        return Err(Error::Invalid("kmax must be at least 2".to_string()));
    }
    let am = a.as_matrix();
    let per_a = permanent(am)?.value;
    let inputs = InputSummary::of_matrix(am);

    let half_gap = per_a.sub(&T::from_rational(&Rational::new(
        BigInt::from(1),
        BigInt::from(2),
    )));
    let one_gap = T::one().sub(&per_a);
    let chang_regime = half_gap.sign_real() == SignDecision::Positive
        && one_gap.sign_real() == SignDecision::Positive;

    let mut reports = Vec::with_capacity(kmax - 1);
    let mut first_compressed = None;
    let mut power = am.matmul(am)?;
    for k in 2..=kmax {
        let per_k = permanent(&power)?.value;
        let report =
            ConjectureReport::inequality(CheckerName::Foregger, inputs.clone(), &per_k, &per_a)
                .with_witness(format!("k = {k}"));
        if first_compressed.is_none() && report.verdict == Verdict::Holds {
            first_compressed = Some(k);
        }
        reports.push(report);
        if k < kmax {
            power = power.matmul(am)?;
        }
    }
    Ok(ForeggerSeries {
        reports,
        chang_regime,
        first_compressed,
    })
}

/// The Drury first-row inequalities for PSD `A` of order `n >= 3`, with
/// `B` the principal submatrix deleting row and column one, and `B_kk`
/// deleting row and column `k` of `B` as indexed in `A`:
///
/// `(a_11 per B)^2 + (sum_k |a_1k|^2 per B_kk)^2 <= (per A)^2`,
///
/// together with its two one-sided consequences `a_11 per B <= per A` and
/// `sum_k |a_1k|^2 per B_kk <= per A`.
pub fn drury_inequalities<T: Scalar>(a: &SquareMatrix<T>) -> Result<Vec<ConjectureReport>> {
    let n = a.size();
    if n < 3 {
        return Err(Error::DimensionMismatch(format!(
            "Drury inequalities need n >= 3, got {n}"
        )));
    }
    require_psd(a)?;
    let inputs = InputSummary::of_matrix(a);
    let b = a.minor(0, 0);
    let per_a = permanent(a)?.value;
    let per_b = permanent(&b)?.value;

    let first = a.at(0, 0).mul(&per_b);
    let mut tail = T::zero();
    for j in 1..n {
        let weight = a.at(0, j).conj().mul(a.at(0, j));
        let per_minor = permanent(&b.minor(j - 1, j - 1))?.value;
        tail = tail.add(&weight.mul(&per_minor));
    }

    let lhs = first.mul(&first).add(&tail.mul(&tail));
    let rhs = per_a.mul(&per_a);
    Ok(vec![
        ConjectureReport::inequality(CheckerName::DruryEq22, inputs.clone(), &lhs, &rhs),
        ConjectureReport::inequality(CheckerName::DruryFirstRow, inputs.clone(), &first, &per_a),
        ConjectureReport::inequality(CheckerName::DruryEq23, inputs, &tail, &per_a),
    ])
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    use super::*;
    use crate::sampling::{birkhoff, psd_gram, real_psd_gram};
    use crate::scalar::{rat, GaussianRational};

    #[test]
    fn per_in_per_two_blocks_is_proven() {
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        for _ in 0..4 {
            let a = psd_gram(&mut rng, 4, 3, 2);
            let reports = per_in_per(&a, 2, 2).unwrap();
            assert_eq!(reports[0].name, CheckerName::PerInPer);
            assert_eq!(reports[0].verdict, Verdict::Holds);
            assert_eq!(reports[1].verdict, Verdict::Holds);
        }
    }

    #[test]
    fn per_in_per_block_diagonal_is_equality() {
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        let b1 = real_psd_gram(&mut rng, 2, 2, 2);
        let b2 = real_psd_gram(&mut rng, 2, 2, 2);
        let a = SquareMatrix::from_fn(4, |i, j| match (i < 2, j < 2) {
            (true, true) => b1.at(i, j).clone(),
            (false, false) => b2.at(i - 2, j - 2).clone(),
            _ => Rational::from_integer(BigInt::from(0)),
        });
        let reports = per_in_per(&a, 2, 2).unwrap();
        assert_eq!(reports[0].verdict, Verdict::Holds);
        assert_eq!(reports[0].margin.text, "0");
    }

    #[test]
    fn per_in_per_scaled_holds_on_six_by_six() {
        let mut rng = ChaCha20Rng::seed_from_u64(43);
        let a = psd_gram(&mut rng, 6, 3, 1);
        let reports = per_in_per(&a, 3, 2).unwrap();
        // per A >= per P / 2! is proven for every PSD A
        assert_eq!(reports[1].verdict, Verdict::Holds);
    }

    #[test]
    fn det_in_det_is_a_theorem() {
        let mut rng = ChaCha20Rng::seed_from_u64(44);
        for _ in 0..4 {
            let a = psd_gram(&mut rng, 4, 4, 2);
            assert_eq!(det_in_det(&a, 2, 2).unwrap().verdict, Verdict::Holds);
        }
        let id = SquareMatrix::<Rational>::identity(6);
        let r = det_in_det(&id, 3, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.margin.text, "0");
    }

    #[test]
    fn bad_partitions_are_rejected() {
        let id = SquareMatrix::<Rational>::identity(4);
        assert!(per_in_per(&id, 3, 2).is_err());
        assert!(det_in_det(&id, 0, 4).is_err());
    }

    #[test]
    fn foregger_idempotent_and_identity() {
        // J_3 / 3 is idempotent: the whole series ties
        let third = rat(1, 3);
        let j3 = DoublyStochasticMatrix::new(SquareMatrix::from_fn(3, |_, _| third.clone()))
            .unwrap();
        let series = foregger(&j3, 4).unwrap();
        assert_eq!(series.reports.len(), 3);
        for r in &series.reports {
            assert_eq!(r.verdict, Verdict::Holds);
            assert_eq!(r.margin.text, "0");
        }
        assert_eq!(series.first_compressed, Some(2));
        assert!(!series.chang_regime); // per = 2/9 < 1/2

        let id = DoublyStochasticMatrix::new(SquareMatrix::<Rational>::identity(3)).unwrap();
        let series = foregger(&id, 3).unwrap();
        for r in &series.reports {
            assert_eq!(r.lhs.text, "1");
            assert_eq!(r.verdict, Verdict::Holds);
        }
        assert!(!series.chang_regime); // per = 1 is not < 1

        assert!(foregger(&id, 1).is_err());
    }

    #[test]
    fn foregger_chang_regime_decreases_strictly() {
        // diagonally dominant doubly stochastic: a_ii = 29/32, a_ij = 1/32
        let a = SquareMatrix::from_fn(4, |i, j| if i == j { rat(29, 32) } else { rat(1, 32) });
        let ds = DoublyStochasticMatrix::new(a).unwrap();
        let series = foregger(&ds, 4).unwrap();
        assert!(series.chang_regime, "per A should land in (1/2, 1)");
        for r in &series.reports {
            assert_eq!(r.verdict, Verdict::Holds);
            // Chang: strict decrease, so the margin is strictly positive
            assert_ne!(r.margin.text, "0");
        }
        assert_eq!(series.first_compressed, Some(2));
    }

    #[test]
    fn foregger_on_random_birkhoff_mixtures() {
        let mut rng = ChaCha20Rng::seed_from_u64(45);
        let ds = birkhoff(&mut rng, 4, 5, 8);
        let series = foregger(&ds, 3).unwrap();
        assert_eq!(series.reports.len(), 2);
        for r in &series.reports {
            assert_ne!(r.verdict, Verdict::InconclusiveWithinError);
        }
    }

    #[test]
    fn drury_identity_is_equality() {
        let id = SquareMatrix::<GaussianRational>::identity(4);
        let reports = drury_inequalities(&id).unwrap();
        assert_eq!(reports.len(), 3);
        assert_eq!(reports[0].lhs.text, "1");
        assert_eq!(reports[0].rhs.text, "1");
        for r in reports {
            assert_eq!(r.verdict, Verdict::Holds);
        }
    }

    #[test]
    fn drury_all_ones_values_are_pinned() {
        let j3 = SquareMatrix::<Rational>::all_ones(3);
        let reports = drury_inequalities(&j3).unwrap();
        // a_11 per B = 2, tail = 1 + 1 = 2, lhs = 4 + 4 = 8, rhs = 36
        assert_eq!(reports[0].lhs.text, "8");
        assert_eq!(reports[0].rhs.text, "36");
        assert_eq!(reports[1].lhs.text, "2");
        assert_eq!(reports[2].lhs.text, "2");
        for r in reports {
            assert_eq!(r.verdict, Verdict::Holds);
        }
    }

    #[test]
    fn drury_exploratory_on_random_psd_is_decided() {
        let mut rng = ChaCha20Rng::seed_from_u64(46);
        for _ in 0..4 {
            let a = psd_gram(&mut rng, 4, 3, 2);
            for r in drury_inequalities(&a).unwrap() {
                assert_ne!(r.verdict, Verdict::InconclusiveWithinError);
            }
        }
    }

    #[test]
    fn drury_small_inputs_are_rejected() {
        let id = SquareMatrix::<Rational>::identity(2);
        assert!(drury_inequalities(&id).is_err());
    }
}
