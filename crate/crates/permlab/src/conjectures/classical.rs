//! The classical determinant/permanent inequalities for PSD matrices and
//! the permanent-dominance check for generalized matrix functions.

use crate::error::{Error, Result};
use crate::gmf::{diagonal_product, normalized_gmf, Character};
use crate::matrix::factor::det_bareiss;
use crate::matrix::{PartitionedView, SquareMatrix};
use crate::perm::PermGroup;
use crate::permanent::permanent;
use crate::scalar::Scalar;

use super::report::{CheckerName, ConjectureReport, InputSummary};
use super::require_psd;

/// The classical chain on one PSD matrix and one 2-block split:
/// Hadamard `det A <= prod a_ii`, Fischer `det A <= det A11 det A22`,
/// Schur `det A <= per A`, Marcus `prod a_ii <= per A`, Lieb
/// `per A11 per A22 <= per A`, plus superadditivity of per and det on a
/// supplied PSD pair (defaults to `(A, A)`).
pub fn classical_suite<T: Scalar>(
    a: &SquareMatrix<T>,
    split: usize,
    pair: Option<(&SquareMatrix<T>, &SquareMatrix<T>)>,
) -> Result<Vec<ConjectureReport>> {
    let n = a.size();
    if split == 0 || split >= n {
        return Err(Error::DimensionMismatch(format!(
            "split {split} must cut an order-{n} matrix into two nonempty blocks"
        )));
    }
    require_psd(a)?;
    let inputs = InputSummary::of_matrix(a);
    let det = det_bareiss(a)?;
    let diag = diagonal_product(a);
    let per = permanent(a)?.value;
    let view = PartitionedView::new(a, &[split, n - split])?;
    let a11 = view.diagonal_block(0);
    let a22 = view.diagonal_block(1);
    let det_blocks = det_bareiss(&a11)?.mul(&det_bareiss(&a22)?);
    let per_blocks = permanent(&a11)?.value.mul(&permanent(&a22)?.value);

    let mut out = vec![
        ConjectureReport::inequality(CheckerName::Hadamard, inputs.clone(), &det, &diag),
        ConjectureReport::inequality(CheckerName::Fischer, inputs.clone(), &det, &det_blocks),
        ConjectureReport::inequality(CheckerName::SchurInequality, inputs.clone(), &det, &per),
        ConjectureReport::inequality(CheckerName::Marcus, inputs.clone(), &diag, &per),
        ConjectureReport::inequality(CheckerName::Lieb, inputs, &per_blocks, &per),
    ];

    let (p, q) = pair.unwrap_or((a, a));
    if p.size() != q.size() {
        return Err(Error::DimensionMismatch(format!(
            "superadditivity pair has orders {} and {}",
            p.size(),
            q.size()
        )));
    }
    require_psd(p)?;
    require_psd(q)?;
    let pair_inputs = InputSummary::of_matrices(&[p.clone(), q.clone()]);
    let s = p.add(q)?;
    out.push(ConjectureReport::inequality(
        CheckerName::PerSuperadditive,
        pair_inputs.clone(),
        &permanent(p)?.value.add(&permanent(q)?.value),
        &permanent(&s)?.value,
    ));
    out.push(ConjectureReport::inequality(
        CheckerName::DetSuperadditive,
        pair_inputs,
        &det_bareiss(p)?.add(&det_bareiss(q)?),
        &det_bareiss(&s)?,
    ));
    Ok(out)
}

/// Permanent dominance: `d^H_chi(A) / chi(e) <= per A` for PSD `A`.
pub fn permanent_dominance<T: Scalar>(
    a: &SquareMatrix<T>,
    h: &PermGroup,
    chi: &Character,
) -> Result<ConjectureReport> {
    require_psd(a)?;
    let lhs = normalized_gmf(a, h, chi)?;
    let rhs = permanent(a)?.value;
    Ok(ConjectureReport::inequality(
        CheckerName::PermanentDominance,
        InputSummary::of_matrix(a),
        &lhs,
        &rhs,
    ))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    use super::*;
    use crate::gmf::irreducible_character;
    use crate::perm::Partition;
    use crate::sampling::psd_gram;
    use crate::scalar::{GaussianRational, Rational};
    use crate::conjectures::report::Verdict;

    #[test]
    fn identity_gives_equalities() {
        let a = SquareMatrix::<Rational>::identity(4);
        let reports = classical_suite(&a, 2, None).unwrap();
        assert_eq!(reports.len(), 7);
        // det = diag product = per = 1 and the blocks multiply to 1, so all
        // margins except the superadditive pair are exactly zero
        for r in &reports[..5] {
            assert_eq!(r.verdict, Verdict::Holds, "{}", r.name);
            assert_eq!(r.margin.text, "0", "{}", r.name);
        }
        // per(2I) = 2^4 = 16 >= 1 + 1; det likewise
        assert_eq!(reports[5].margin.text, "14");
        assert_eq!(reports[6].margin.text, "14");
    }

    #[test]
    fn all_ones_two_by_two() {
        let a = SquareMatrix::<Rational>::all_ones(2);
        let reports = classical_suite(&a, 1, None).unwrap();
        // per J_2 = 2 >= 1*1 (Lieb) and >= diagonal product 1 (Marcus)
        for r in reports {
            assert_eq!(r.verdict, Verdict::Holds, "{}", r.name);
        }
    }

    #[test]
    fn random_exact_psd_holds_everywhere() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..10 {
            let a = psd_gram(&mut rng, 4, 4, 3);
            for r in classical_suite(&a, 2, None).unwrap() {
                assert_eq!(r.verdict, Verdict::Holds, "{} on random PSD", r.name);
                assert_eq!(r.margin.err, 0.0);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = SquareMatrix::<Rational>::identity(3);
        assert!(classical_suite(&a, 0, None).is_err());
        assert!(classical_suite(&a, 3, None).is_err());
        let indefinite = SquareMatrix::<Rational>::from_int_rows(&[&[1, 2], &[2, 1]]);
        assert!(matches!(
            classical_suite(&indefinite, 1, None),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn dominance_for_sign_character_is_det_vs_per() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let a = psd_gram(&mut rng, 4, 4, 3);
        let s4 = PermGroup::symmetric(4).unwrap();
        let chi = Character::sign(s4.clone());
        let r = permanent_dominance(&a, &s4, &chi).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        // the lhs is exactly det A
        let det = det_bareiss(&a).unwrap();
        assert_eq!(r.lhs.text, det.to_string());
    }

    #[test]
    fn dominance_for_trivial_group_is_marcus() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let a = psd_gram(&mut rng, 3, 3, 3);
        let e = PermGroup::trivial(3);
        let chi = Character::trivial(e.clone());
        let r = permanent_dominance(&a, &e, &chi).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.lhs.text, diagonal_product(&a).to_string());
    }

    #[test]
    fn dominance_for_immanants_small() {
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        for n in 2..=4usize {
            let a: SquareMatrix<GaussianRational> = psd_gram(&mut rng, n, n, 2);
            for lambda in Partition::all(n) {
                let chi = irreducible_character(&lambda).unwrap();
                let group = chi.group().clone();
                let r = permanent_dominance(&a, &group, &chi).unwrap();
                assert_eq!(
                    r.verdict,
                    Verdict::Holds,
                    "immanant {:?} on n = {n}",
                    lambda.parts()
                );
            }
        }
    }
}
