//! Permanent evaluation: a factorial-time oracle, the Ryser inclusion–
//! exclusion engine, and the Glynn ±1 engine, all generic over the scalar
//! fields. Exact fields give exact values; certified floats carry an error
//! radius through every operation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{PartitionedView, SquareMatrix};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PermanentAlgorithm {
    Naive,
    Ryser,
    Glynn,
}

impl PermanentAlgorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            PermanentAlgorithm::Naive => "naive",
            PermanentAlgorithm::Ryser => "ryser",
            PermanentAlgorithm::Glynn => "glynn",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PermanentResult<T: Scalar> {
    pub value: T,
    pub algorithm: PermanentAlgorithm,
    pub exact: bool,
    pub error_radius: f64,
}

impl<T: Scalar> PermanentResult<T> {
    fn new(value: T, algorithm: PermanentAlgorithm) -> Self {
        let error_radius = value.error_radius();
        PermanentResult {
            value,
            algorithm,
            exact: T::EXACT,
            error_radius,
        }
    }
}

const NAIVE_GUARD: usize = 9;
const MASK_GUARD: usize = 32;

fn guard(n: usize, limit: usize, what: &str) -> Result<()> {
    if n > limit {
        return Err(Error::SizeGuard(format!(
            "{what} supports n <= {limit}, got {n}"
        )));
    }
    Ok(())
}

/// Direct sum over all n! permutations; the oracle the fast engines are
/// checked against.
pub fn per_naive<T: Scalar>(a: &SquareMatrix<T>) -> Result<PermanentResult<T>> {
    let n = a.size();
    guard(n, NAIVE_GUARD, "per_naive")?;
    fn rec<T: Scalar>(a: &SquareMatrix<T>, row: usize, used: u32, partial: &T, acc: &mut T) {
        let n = a.size();
        if row == n {
            *acc = acc.add(partial);
            return;
        }
        for col in 0..n {
            if used >> col & 1 == 0 {
                let next = partial.mul(a.at(row, col));
                if T::EXACT && next.is_zero() {
                    continue;
                }
                rec(a, row + 1, used | 1 << col, &next, acc);
            }
        }
    }
    let mut acc = T::zero();
    rec(a, 0, 0, &T::one(), &mut acc);
    Ok(PermanentResult::new(acc, PermanentAlgorithm::Naive))
}

fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// One contiguous run `k in [lo, hi)` of the Gray-code subset sequence.
/// Initializes the row sums for `gray(lo)` from scratch, then updates one
/// column per step.
fn ryser_chunk<T: Scalar>(a: &SquareMatrix<T>, lo: u64, hi: u64) -> T {
    let n = a.size();
    let mut s = gray(lo);
    let mut sums: Vec<T> = (0..n)
        .map(|i| T::sum((0..n).filter(|j| s >> j & 1 == 1).map(|j| a.at(i, j).clone())))
        .collect();
    let mut acc = T::zero();
    let mut k = lo;
    loop {
        let mut prod = T::one();
        for v in &sums {
            prod = prod.mul(v);
            if T::EXACT && prod.is_zero() {
                break;
            }
        }
        // term sign is (-1)^(n - |S|)
        if (n as u32 - s.count_ones()) & 1 == 1 {
            acc = acc.sub(&prod);
        } else {
            acc = acc.add(&prod);
        }
        k += 1;
        if k >= hi {
            return acc;
        }
        let b = k.trailing_zeros() as usize;
        s ^= 1 << b;
        if s >> b & 1 == 1 {
            for (i, v) in sums.iter_mut().enumerate() {
                *v = v.add(a.at(i, b));
            }
        } else {
            for (i, v) in sums.iter_mut().enumerate() {
                *v = v.sub(a.at(i, b));
            }
        }
    }
}

/// Subsets per work chunk. Fixed (not derived from the worker count) so the
/// chunk boundaries, and therefore the float reduction order, never change.
const RYSER_CHUNK_LEN: u64 = 1 << 14;

/// Ryser inclusion–exclusion over column subsets in Gray-code order,
/// O(2^n * n). Chunks may be evaluated in parallel; partial sums are always
/// combined in ascending chunk order.
pub fn per_ryser<T: Scalar>(a: &SquareMatrix<T>) -> Result<PermanentResult<T>> {
    let n = a.size();
    guard(n, MASK_GUARD, "per_ryser")?;
    if n == 0 {
        return Ok(PermanentResult::new(T::one(), PermanentAlgorithm::Ryser));
    }
    let last = (1u64 << n) - 1; // k runs over 1..=last
    let value = if last <= RYSER_CHUNK_LEN {
        ryser_chunk(a, 1, last + 1)
    } else {
        let nchunks = last.div_ceil(RYSER_CHUNK_LEN);
        let partials: Vec<T> = (0..nchunks)
            .into_par_iter()
            .map(|c| {
                let lo = 1 + c * RYSER_CHUNK_LEN;
                let hi = (lo + RYSER_CHUNK_LEN).min(last + 1);
                ryser_chunk(a, lo, hi)
            })
            .collect();
        T::sum(partials.into_iter())
    };
    Ok(PermanentResult::new(value, PermanentAlgorithm::Ryser))
}

/// Glynn ±1 formula with Gray-code sign flips and exact halving,
/// O(2^(n-1) * n). Cross-checks Ryser.
pub fn per_glynn<T: Scalar>(a: &SquareMatrix<T>) -> Result<PermanentResult<T>> {
    let n = a.size();
    guard(n, MASK_GUARD, "per_glynn")?;
    if n == 0 {
        return Ok(PermanentResult::new(T::one(), PermanentAlgorithm::Glynn));
    }
    // delta_0 is pinned to +1; bits of the Gray index flip rows 1..n
    let doubled: Vec<Vec<T>> = (1..n)
        .map(|r| (0..n).map(|j| a.at(r, j).add(a.at(r, j))).collect())
        .collect();
    let mut sums: Vec<T> = (0..n)
        .map(|j| T::sum((0..n).map(|i| a.at(i, j).clone())))
        .collect();
    let mut s: u64 = 0;
    let mut acc = T::zero();
    let total = 1u64 << (n - 1);
    for k in 0..total {
        if k > 0 {
            let b = k.trailing_zeros() as usize;
            s ^= 1 << b;
            let row2 = &doubled[b];
            if s >> b & 1 == 1 {
                for (j, v) in sums.iter_mut().enumerate() {
                    *v = v.sub(&row2[j]);
                }
            } else {
                for (j, v) in sums.iter_mut().enumerate() {
                    *v = v.add(&row2[j]);
                }
            }
        }
        let mut prod = T::one();
        for v in &sums {
            prod = prod.mul(v);
        }
        if s.count_ones() & 1 == 1 {
            acc = acc.sub(&prod);
        } else {
            acc = acc.add(&prod);
        }
    }
    let mut value = acc;
    for _ in 0..n - 1 {
        value = value.halve();
    }
    Ok(PermanentResult::new(value, PermanentAlgorithm::Glynn))
}

/// Default engine.
pub fn permanent<T: Scalar>(a: &SquareMatrix<T>) -> Result<PermanentResult<T>> {
    per_ryser(a)
}

/// The matrix with entries `a_ij * per A(i|j)` (A with row i and column j
/// deleted). Each row and each column of the result sums to per A.
pub fn per_minor_matrix<T: Scalar>(a: &SquareMatrix<T>) -> Result<SquareMatrix<T>> {
    let n = a.size();
    if n < 2 {
        return Err(Error::DimensionMismatch(
            "per_minor_matrix needs n >= 2".to_string(),
        ));
    }
    guard(n - 1, MASK_GUARD, "per_ryser")?;
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let m = per_ryser(&a.minor(i, j))?.value;
            data.push(a.at(i, j).mul(&m));
        }
    }
    SquareMatrix::new(n, data)
}

/// The per-in-per inner matrix: `P_ij = per(A_ij)` over a partition into
/// equal-size square blocks.
pub fn per_partition<T: Scalar>(p: &PartitionedView<'_, T>) -> Result<SquareMatrix<T>> {
    let m = p.block_count();
    let size = p.block_size(0);
    if (0..m).any(|i| p.block_size(i) != size) {
        return Err(Error::DimensionMismatch(
            "per_partition needs equal block sizes".to_string(),
        ));
    }
    let mut data = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            data.push(per_ryser(&p.block(i, j)?)?.value);
        }
    }
    SquareMatrix::new(m, data)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    use super::*;
    use crate::matrix::gram_from_rows;
    use crate::scalar::{rat, rat_int, ApproxComplex, GaussianRational, Rational};

    fn shchesnovich_h() -> SquareMatrix<GaussianRational> {
        let u = [(4, 2), (2, -3), (-4, -4), (-3, 4), (1, 0)]
            .map(|(r, i)| GaussianRational::from_ints(r, i));
        let v = [(2, -4), (0, -3), (2, -4), (0, -3), (-5, -7)]
            .map(|(r, i)| GaussianRational::from_ints(r, i));
        gram_from_rows(&[u.to_vec(), v.to_vec()]).unwrap()
    }

    #[test]
    fn definition_cases() {
        let id = SquareMatrix::<Rational>::identity(4);
        assert_eq!(per_naive(&id).unwrap().value, rat_int(1));
        assert_eq!(per_ryser(&id).unwrap().value, rat_int(1));
        assert_eq!(per_glynn(&id).unwrap().value, rat_int(1));
        let j4 = SquareMatrix::<Rational>::all_ones(4);
        assert_eq!(per_naive(&j4).unwrap().value, rat_int(24));
        let j5 = SquareMatrix::<Rational>::all_ones(5);
        assert_eq!(per_glynn(&j5).unwrap().value, rat_int(120));
        // [[a,b],[c,d]] -> ad + bc
        let m = SquareMatrix::from_rows(vec![
            vec![rat(1, 2), rat(2, 3)],
            vec![rat(3, 5), rat(5, 7)],
        ])
        .unwrap();
        let expect = rat(1, 2) * rat(5, 7) + rat(2, 3) * rat(3, 5);
        for f in [per_naive, per_ryser, per_glynn] {
            assert_eq!(f(&m).unwrap().value, expect);
        }
        let zero = SquareMatrix::<Rational>::from_int_rows(&[&[0, 0], &[0, 0]]);
        assert!(per_glynn(&zero).unwrap().value.is_zero());
    }

    #[test]
    fn result_metadata() {
        let j3 = SquareMatrix::<Rational>::all_ones(3);
        let r = per_ryser(&j3).unwrap();
        assert!(r.exact);
        assert_eq!(r.error_radius, 0.0);
        assert_eq!(r.algorithm.as_str(), "ryser");
        let f = per_ryser(&j3.embed(96)).unwrap();
        assert!(!f.exact);
        assert!(f.error_radius > 0.0);
        assert!((f.value.re_f64() - 6.0).abs() <= f.error_radius);
    }

    #[test]
    fn guards() {
        let big = SquareMatrix::<Rational>::identity(10);
        assert!(matches!(per_naive(&big), Err(Error::SizeGuard(_))));
        let huge = SquareMatrix::<Rational>::identity(33);
        assert!(matches!(per_ryser(&huge), Err(Error::SizeGuard(_))));
    }

    fn random_gaussian(rng: &mut ChaCha20Rng, n: usize) -> SquareMatrix<GaussianRational> {
        SquareMatrix::from_fn(n, |_, _| {
            GaussianRational::from_ints(rng.random_range(-9..=9), rng.random_range(-9..=9))
        })
    }

    #[test]
    fn engines_agree_on_random_matrices() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for n in 2..=6 {
            for _ in 0..4 {
                let a = random_gaussian(&mut rng, n);
                let nv = per_naive(&a).unwrap().value;
                assert_eq!(per_ryser(&a).unwrap().value, nv);
                assert_eq!(per_glynn(&a).unwrap().value, nv);
            }
        }
    }

    #[test]
    fn shchesnovich_permanent() {
        let h = shchesnovich_h();
        let per = per_ryser(&h).unwrap().value;
        assert_eq!(per.to_rational(), Some(rat_int(814016640)));
        assert_eq!(per_glynn(&h).unwrap().value, per);
        // float mode brackets the same number
        let f = per_ryser(&h.embed(128)).unwrap();
        assert!((f.value.re_f64() - 814016640.0).abs() <= f.error_radius);
        assert!(f.error_radius < 1e-6);
    }

    #[test]
    fn invariances() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let a = random_gaussian(&mut rng, 5);
        let p = per_ryser(&a).unwrap().value;
        assert_eq!(per_ryser(&a.transpose()).unwrap().value, p);
        assert_eq!(
            per_ryser(&a.permute_rows(&[2, 0, 4, 1, 3])).unwrap().value,
            p
        );
        assert_eq!(
            per_ryser(&a.permute_cols(&[4, 3, 0, 2, 1])).unwrap().value,
            p
        );
        // scaling one row scales the permanent
        let mut b = a.clone();
        let c = GaussianRational::from_ints(3, -2);
        for j in 0..5 {
            b.set(2, j, b.at(2, j).mul(&c));
        }
        assert_eq!(per_ryser(&b).unwrap().value, p.mul(&c));
    }

    #[test]
    fn van_der_waerden_value() {
        for n in 2..=5 {
            let m = SquareMatrix::<Rational>::all_ones(n)
                .scale(&rat(1, n as i64));
            let mut expect = Rational::one();
            for k in 1..=n {
                expect = expect * rat(k as i64, n as i64);
            }
            assert_eq!(per_ryser(&m).unwrap().value, expect);
        }
    }

    #[test]
    fn psd_chain_and_superadditivity() {
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        for n in 2..=4 {
            let rows_a: Vec<Vec<GaussianRational>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            GaussianRational::from_ints(
                                rng.random_range(-3..=3),
                                rng.random_range(-3..=3),
                            )
                        })
                        .collect()
                })
                .collect();
            let rows_b: Vec<Vec<GaussianRational>> = rows_a
                .iter()
                .map(|r| r.iter().map(|z| z.conj().mul(z).add(&GaussianRational::one())).collect())
                .collect();
            let a = gram_from_rows(&rows_a).unwrap();
            let b = gram_from_rows(&rows_b).unwrap();
            let (pa, pb) = (
                per_ryser(&a).unwrap().value.to_rational().unwrap(),
                per_ryser(&b).unwrap().value.to_rational().unwrap(),
            );
            let det = crate::matrix::factor::det_bareiss(&a)
                .unwrap()
                .to_rational()
                .unwrap();
            let diag: Rational = (0..n)
                .map(|i| a.at(i, i).to_rational().unwrap())
                .product();
            // 0 <= det A <= prod a_ii <= per A
            assert!(det >= rat_int(0));
            assert!(det <= diag);
            assert!(diag <= pa);
            // per(A+B) >= per A + per B
            let sum = per_ryser(&a.add(&b).unwrap()).unwrap().value.to_rational().unwrap();
            assert!(sum >= pa + pb);
        }
    }

    #[test]
    fn minor_matrix() {
        let i3 = SquareMatrix::<Rational>::identity(3);
        assert_eq!(per_minor_matrix(&i3).unwrap(), i3);
        let j3 = SquareMatrix::<Rational>::all_ones(3);
        assert_eq!(
            per_minor_matrix(&j3).unwrap(),
            j3.scale(&rat_int(2))
        );
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let a = random_gaussian(&mut rng, 5);
        let m = per_minor_matrix(&a).unwrap();
        let p = per_ryser(&a).unwrap().value;
        for s in m.row_sums() {
            assert_eq!(s, p);
        }
        for s in m.col_sums() {
            assert_eq!(s, p);
        }
        let tiny = SquareMatrix::<Rational>::identity(1);
        assert!(per_minor_matrix(&tiny).is_err());
    }

    #[test]
    fn partition_permanents() {
        let j4 = SquareMatrix::<Rational>::all_ones(4);
        let view = PartitionedView::new(&j4, &[2, 2]).unwrap();
        assert_eq!(
            per_partition(&view).unwrap(),
            SquareMatrix::<Rational>::all_ones(2).scale(&rat_int(2))
        );
        // block-diagonal input gives a diagonal inner matrix
        let bd = SquareMatrix::<Rational>::from_int_rows(&[
            &[1, 2, 0, 0],
            &[3, 4, 0, 0],
            &[0, 0, 5, 6],
            &[0, 0, 7, 8],
        ]);
        let view = PartitionedView::new(&bd, &[2, 2]).unwrap();
        let p = per_partition(&view).unwrap();
        assert_eq!(p[(0, 0)], rat_int(10));
        assert_eq!(p[(1, 1)], rat_int(82));
        assert!(p[(0, 1)].is_zero() && p[(1, 0)].is_zero());
        let uneven = PartitionedView::new(&j4, &[1, 3]).unwrap();
        assert!(per_partition(&uneven).is_err());
    }

    #[test]
    fn ryser_chunking_is_deterministic() {
        // n = 15 forces the multi-chunk path (2^15 - 1 subsets, chunk 2^14)
        let a = SquareMatrix::<ApproxComplex>::from_fn(15, |i, j| {
            ApproxComplex::from_f64s(((i * 31 + j * 17) % 7) as f64 / 3.0, 0.0, 64)
        });
        let x = per_ryser(&a).unwrap();
        let y = per_ryser(&a).unwrap();
        assert_eq!(x.value, y.value);
        assert!(x.error_radius.is_finite());
    }
}
