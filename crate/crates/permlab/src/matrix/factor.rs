//! Exact Hermitian factorization and elimination: positive semidefiniteness
//! certificates via pivoted LDL*, fraction-free determinants, and exact rank.

use super::SquareMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, SignDecision};

/// Outcome of the exact PSD test.
#[derive(Clone, Debug)]
pub enum PsdOutcome<T: Scalar> {
    /// `A = P L D L* P*` with the listed strictly positive pivots in `D`;
    /// `rank` equals the number of pivots.
    Psd { rank: usize, pivots: Vec<T> },
    NotPsd { witness: String },
}

/// Pivoted LDL* positive semidefiniteness certificate for a Hermitian matrix
/// over an exact field.
///
/// At each step a strictly positive diagonal entry of the Schur complement is
/// chosen as pivot. If none exists, the matrix is PSD exactly when the whole
/// remaining block is zero (a Hermitian PSD matrix with a zero diagonal entry
/// has a zero row).
pub fn ldl_psd_certificate<T: Scalar>(a: &SquareMatrix<T>) -> Result<PsdOutcome<T>> {
    if !T::EXACT {
        return Err(Error::Invalid(
            "exact PSD factorization requires an exact field".to_string(),
        ));
    }
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let n = a.size();
    let mut s = a.clone();
    let mut pivots = Vec::new();
    for k in 0..n {
        let mut choice = None;
        for i in k..n {
            match s.at(i, i).sign_real() {
                SignDecision::Positive => {
                    choice = Some(i);
                    break;
                }
                SignDecision::Negative => {
                    return Ok(PsdOutcome::NotPsd {
                        witness: format!(
                            "diagonal entry {} of the order-{} Schur complement is negative",
                            i,
                            n - k
                        ),
                    });
                }
                SignDecision::Zero => {}
                SignDecision::Inconclusive => {
                    return Err(Error::Invalid(
                        "exact sign decision failed on a diagonal entry".to_string(),
                    ));
                }
            }
        }
        let Some(p) = choice else {
            // every remaining diagonal is zero: PSD iff the block vanishes
            for i in k..n {
                for j in k..n {
                    if !s.at(i, j).is_zero() {
                        return Ok(PsdOutcome::NotPsd {
                            witness: format!(
                                "zero diagonal with nonzero entry at ({i},{j}) in the Schur complement"
                            ),
                        });
                    }
                }
            }
            return Ok(PsdOutcome::Psd { rank: k, pivots });
        };
        if p != k {
            // symmetric row/column swap keeps the matrix Hermitian
            let swapped = {
                let idx: Vec<usize> = (0..n)
                    .map(|i| if i == k { p } else if i == p { k } else { i })
                    .collect();
                s.permute_rows(&idx).permute_cols(&idx)
            };
            s = swapped;
        }
        let d = s.at(k, k).clone();
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                // S[i][j] -= S[i][k] * conj(S[j][k]) / d
                let t = s.at(i, k).mul(&s.at(j, k).conj()).div(&d)?;
                s.set(i, j, s.at(i, j).sub(&t));
            }
        }
        for i in (k + 1)..n {
            s.set(i, k, T::zero());
            s.set(k, i, T::zero());
        }
        pivots.push(d);
    }
    Ok(PsdOutcome::Psd { rank: n, pivots })
}

/// Three-way PSD classification: `Positive` = positive definite, `Zero` =
/// semidefinite and singular, `Negative` = not PSD. Exact fields decide via
/// LDL*; certified floats via the eigenvalue routine with its documented
/// tolerance.
pub fn psd_status<T: Scalar>(a: &SquareMatrix<T>) -> Result<SignDecision> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    if T::EXACT {
        Ok(match ldl_psd_certificate(a)? {
            PsdOutcome::Psd { rank, .. } if rank == a.size() => SignDecision::Positive,
            PsdOutcome::Psd { .. } => SignDecision::Zero,
            PsdOutcome::NotPsd { .. } => SignDecision::Negative,
        })
    } else {
        let spec = super::eigen::eigenvalues_hermitian(a, 64)?;
        Ok(spec.psd_classification())
    }
}

pub fn is_positive_semidefinite<T: Scalar>(a: &SquareMatrix<T>) -> Result<bool> {
    Ok(psd_status(a)? != SignDecision::Negative)
}

/// Determinant by the fraction-free Bareiss elimination; every interior
/// division is exact. Works over any of the scalar fields (for certified
/// floats the radii propagate through, and a pivot indistinguishable from
/// zero surfaces as a division error).
pub fn det_bareiss<T: Scalar>(a: &SquareMatrix<T>) -> Result<T> {
    let n = a.size();
    if n == 0 {
        return Ok(T::one());
    }
    let mut m = a.clone();
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m.at(k, k).is_zero() {
            let Some(r) = ((k + 1)..n).find(|&r| !m.at(r, k).is_zero()) else {
                return Ok(T::zero());
            };
            let idx: Vec<usize> = (0..n)
                .map(|i| if i == k { r } else if i == r { k } else { i })
                .collect();
            m = m.permute_rows(&idx);
            sign_flip = !sign_flip;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = m.at(i, j).mul(m.at(k, k)).sub(&m.at(i, k).mul(m.at(k, j)));
                m.set(i, j, num.div(&prev)?);
            }
        }
        prev = m.at(k, k).clone();
    }
    let d = m.at(n - 1, n - 1).clone();
    Ok(if sign_flip { d.neg() } else { d })
}

/// Exact rank by row reduction (exact fields only).
pub fn rank_exact<T: Scalar>(a: &SquareMatrix<T>) -> Result<usize> {
    if !T::EXACT {
        return Err(Error::Invalid(
            "exact rank requires an exact field".to_string(),
        ));
    }
    let n = a.size();
    let mut m = a.clone();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| !m.at(r, col).is_zero()) else {
            continue;
        };
        if p != rank {
            let idx: Vec<usize> = (0..n)
                .map(|i| if i == rank { p } else if i == p { rank } else { i })
                .collect();
            m = m.permute_rows(&idx);
        }
        let pivot = m.at(rank, col).clone();
        for r in (rank + 1)..n {
            let factor = m.at(r, col).div(&pivot)?;
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let t = factor.mul(m.at(rank, c));
                m.set(r, c, m.at(r, c).sub(&t));
            }
        }
        rank += 1;
        if rank == n {
            break;
        }
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::gram_from_rows;
    use crate::scalar::{rat_int, GaussianRational, Rational};

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = SquareMatrix::<Rational>::from_int_rows(&[
            &[2, 0, 1],
            &[1, 3, 2],
            &[1, 1, 1],
        ]);
        // det = 2*(3-2) - 0 + 1*(1-3) = 0
        assert_eq!(det_bareiss(&m).unwrap(), rat_int(0));
        let m = SquareMatrix::<Rational>::from_int_rows(&[
            &[0, 2, 1],
            &[1, 0, 2],
            &[3, 1, 0],
        ]);
        // needs a row swap; det = 13
        assert_eq!(det_bareiss(&m).unwrap(), rat_int(13));
        let g = SquareMatrix::from_rows(vec![
            vec![GaussianRational::from_ints(0, 1), GaussianRational::from_ints(1, 0)],
            vec![GaussianRational::from_ints(1, 0), GaussianRational::from_ints(0, -1)],
        ])
        .unwrap();
        // det = i*(-i) - 1 = 0
        assert!(det_bareiss(&g).unwrap().is_zero());
    }

    #[test]
    fn det_is_multiplicative() {
        let a = SquareMatrix::<Rational>::from_int_rows(&[&[1, 2], &[3, 4]]);
        let b = SquareMatrix::<Rational>::from_int_rows(&[&[0, 5], &[1, -2]]);
        let lhs = det_bareiss(&a.matmul(&b).unwrap()).unwrap();
        let rhs = det_bareiss(&a).unwrap().mul(&det_bareiss(&b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn psd_certificates() {
        // rank-2 Gram matrix of 3 vectors
        let rows = vec![
            vec![rat_int(1), rat_int(2), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(1)],
        ];
        let g = gram_from_rows(&rows).unwrap();
        match ldl_psd_certificate(&g).unwrap() {
            PsdOutcome::Psd { rank, pivots } => {
                assert_eq!(rank, 2);
                assert_eq!(pivots.len(), 2);
                assert!(pivots.iter().all(|p| p.sign_real() == SignDecision::Positive));
            }
            PsdOutcome::NotPsd { witness } => panic!("should be PSD: {witness}"),
        }
        assert_eq!(psd_status(&g).unwrap(), SignDecision::Zero);
        assert_eq!(rank_exact(&g).unwrap(), 2);
        assert_eq!(det_bareiss(&g).unwrap(), rat_int(0));

        let pd = SquareMatrix::<Rational>::from_int_rows(&[&[2, 1], &[1, 2]]);
        assert_eq!(psd_status(&pd).unwrap(), SignDecision::Positive);

        let indef = SquareMatrix::<Rational>::from_int_rows(&[&[1, 3], &[3, 1]]);
        assert_eq!(psd_status(&indef).unwrap(), SignDecision::Negative);

        // zero diagonal with a nonzero off-diagonal entry is indefinite
        let zd = SquareMatrix::<Rational>::from_int_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(psd_status(&zd).unwrap(), SignDecision::Negative);

        let zero = SquareMatrix::<Rational>::from_int_rows(&[&[0, 0], &[0, 0]]);
        assert_eq!(psd_status(&zero).unwrap(), SignDecision::Zero);

        let nonherm = SquareMatrix::<Rational>::from_int_rows(&[&[1, 2], &[0, 1]]);
        assert!(matches!(psd_status(&nonherm), Err(Error::NotHermitian)));
    }

    #[test]
    fn psd_needs_pivoting() {
        // leading principal minor is singular but the matrix is PSD
        let m = SquareMatrix::<Rational>::from_int_rows(&[
            &[0, 0, 0],
            &[0, 1, 1],
            &[0, 1, 2],
        ]);
        match ldl_psd_certificate(&m).unwrap() {
            PsdOutcome::Psd { rank, .. } => assert_eq!(rank, 2),
            PsdOutcome::NotPsd { witness } => panic!("should be PSD: {witness}"),
        }
    }

    #[test]
    fn rank_of_products() {
        let a = SquareMatrix::<Rational>::from_int_rows(&[
            &[1, 2, 3],
            &[2, 4, 6],
            &[0, 1, 1],
        ]);
        assert_eq!(rank_exact(&a).unwrap(), 2);
        assert_eq!(rank_exact(&SquareMatrix::<Rational>::identity(4)).unwrap(), 4);
        assert_eq!(
            rank_exact(&SquareMatrix::<Rational>::all_ones(3)).unwrap(),
            1
        );
    }

    #[test]
    fn complex_psd_with_rational_pivots() {
        let g = gram_from_rows(&[vec![
            GaussianRational::from_ints(4, 2),
            GaussianRational::from_ints(2, -3),
            GaussianRational::from_ints(-4, -4),
        ]])
        .unwrap();
        assert_eq!(psd_status(&g).unwrap(), SignDecision::Zero);
        assert_eq!(rank_exact(&g).unwrap(), 1);
    }
}
