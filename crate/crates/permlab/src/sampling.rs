//! Seeded random generators for test inputs.
//!
//! Everything here that feeds the exact checkers is itself exact: Gram
//! matrices come from small integer or dyadic-rational vectors, unit
//! vectors come from a rational point on the sphere (stereographic image
//! of a dyadic point, so the norm is one *exactly*), and doubly stochastic
//! matrices are convex combinations of permutation matrices with dyadic
//! weights that sum to one exactly.  A float screening pass can therefore
//! always be replayed in exact arithmetic on the very same input.

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{
    gram_from_rows, CorrelationMatrix, DoublyStochasticMatrix, SquareMatrix,
};
use crate::scalar::{GaussianRational, Rational};

/// Default denominator exponent for dyadic parameters: coordinates are
/// multiples of `2^-DYADIC_BITS`.
pub const DYADIC_BITS: u32 = 12;

/// Uniform dyadic rational in `[-1, 1]` with denominator `2^bits`.
fn dyadic<R: Rng>(rng: &mut R, bits: u32) -> Rational {
    let den: i64 = 1 << bits;
    let num = rng.random_range(-den..=den);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Uniform dyadic rational in `(0, 1]` with denominator `2^bits`.
fn dyadic_positive<R: Rng>(rng: &mut R, bits: u32) -> Rational {
    let den: i64 = 1 << bits;
    let num = rng.random_range(1..=den);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Inverse stereographic image `(2t, |t|^2 - 1) / (|t|^2 + 1)` of a
/// rational point `t` in `R^(d-1)`: a point on the unit sphere in `R^d`
/// with rational coordinates and squared norm exactly one.
pub(crate) fn stereographic_point(t: &[Rational]) -> Vec<Rational> {
    let q: Rational = t.iter().map(|x| x * x).sum();
    let denom = &q + Rational::one();
    let mut out: Vec<Rational> = t
        .iter()
        .map(|x| Rational::new(BigInt::from(2), BigInt::one()) * x / &denom)
        .collect();
    out.push((&q - Rational::one()) / &denom);
    out
}

/// Exact point on the real unit sphere in `R^dim`: the inverse
/// stereographic image of a dyadic point `t` in `R^(dim-1)`.
pub fn real_unit_vector<R: Rng>(rng: &mut R, dim: usize, bits: u32) -> Vec<Rational> {
    assert!(dim >= 1, "unit vector needs a positive dimension");
    if dim == 1 {
        let sign = if rng.random_range(0..2) == 0 { 1 } else { -1 };
        return vec![Rational::from_integer(BigInt::from(sign))];
    }
    let t: Vec<Rational> = (0..dim - 1).map(|_| dyadic(rng, bits)).collect();
    stereographic_point(&t)
}

/// Exact point on the complex unit sphere in `C^dim`, built by pairing the
/// `2*dim` real coordinates of a real unit vector.
pub fn complex_unit_vector<R: Rng>(
    rng: &mut R,
    dim: usize,
    bits: u32,
) -> Vec<GaussianRational> {
    let x = real_unit_vector(rng, 2 * dim, bits);
    (0..dim)
        .map(|j| GaussianRational::new(x[2 * j].clone(), x[2 * j + 1].clone()))
        .collect()
}

/// Random Gaussian-rational matrix with integer real and imaginary parts
/// drawn uniformly from `[-height, height]`.
pub fn gaussian_int_matrix<R: Rng>(
    rng: &mut R,
    n: usize,
    height: i64,
) -> SquareMatrix<GaussianRational> {
    let entries = (0..n * n)
        .map(|_| {
            GaussianRational::from_ints(
                rng.random_range(-height..=height),
                rng.random_range(-height..=height),
            )
        })
        .collect();
    SquareMatrix::new(n, entries).expect("square by construction")
}

/// Random rational matrix with integer entries in `[-height, height]`.
pub fn rational_int_matrix<R: Rng>(rng: &mut R, n: usize, height: i64) -> SquareMatrix<Rational> {
    let entries = (0..n * n)
        .map(|_| Rational::from_integer(BigInt::from(rng.random_range(-height..=height))))
        .collect();
    SquareMatrix::new(n, entries).expect("square by construction")
}

/// Exact PSD matrix of rank at most `rank`: the Gram matrix of `rank`
/// random Gaussian-rational integer vectors.
pub fn psd_gram<R: Rng>(
    rng: &mut R,
    n: usize,
    rank: usize,
    height: i64,
) -> SquareMatrix<GaussianRational> {
    let rows: Vec<Vec<GaussianRational>> = (0..rank.max(1))
        .map(|_| {
            (0..n)
                .map(|_| {
                    GaussianRational::from_ints(
                        rng.random_range(-height..=height),
                        rng.random_range(-height..=height),
                    )
                })
                .collect()
        })
        .collect();
    gram_from_rows(&rows).expect("row lengths agree by construction")
}

/// Exact real PSD matrix of rank at most `rank` with integer entries.
pub fn real_psd_gram<R: Rng>(
    rng: &mut R,
    n: usize,
    rank: usize,
    height: i64,
) -> SquareMatrix<Rational> {
    let rows: Vec<Vec<Rational>> = (0..rank.max(1))
        .map(|_| {
            (0..n)
                .map(|_| Rational::from_integer(BigInt::from(rng.random_range(-height..=height))))
                .collect()
        })
        .collect();
    gram_from_rows(&rows).expect("row lengths agree by construction")
}

/// Exact random correlation matrix: the Gram matrix of `n` unit vectors
/// drawn from the complex unit sphere in `C^rank`.  Hermitian PSD with
/// exact unit diagonal by construction, rank at most `rank`.
pub fn correlation_gram<R: Rng>(
    rng: &mut R,
    n: usize,
    rank: usize,
    bits: u32,
) -> CorrelationMatrix<GaussianRational> {
    let vectors: Vec<Vec<GaussianRational>> = (0..n)
        .map(|_| complex_unit_vector(rng, rank.max(1), bits))
        .collect();
    // gram_from_rows contracts over the row index, so lay the i-th unit
    // vector down as the i-th *column*.
    let rows: Vec<Vec<GaussianRational>> = (0..rank.max(1))
        .map(|r| (0..n).map(|i| vectors[i][r].clone()).collect())
        .collect();
    let g = gram_from_rows(&rows).expect("row lengths agree by construction");
    CorrelationMatrix::new_unchecked(g)
}

/// Real variant of [`correlation_gram`]: Gram matrix of `n` unit vectors
/// on the real sphere in `R^rank`.
pub fn real_correlation_gram<R: Rng>(
    rng: &mut R,
    n: usize,
    rank: usize,
    bits: u32,
) -> CorrelationMatrix<Rational> {
    let vectors: Vec<Vec<Rational>> = (0..n)
        .map(|_| real_unit_vector(rng, rank.max(1), bits))
        .collect();
    let rows: Vec<Vec<Rational>> = (0..rank.max(1))
        .map(|r| (0..n).map(|i| vectors[i][r].clone()).collect())
        .collect();
    let g = gram_from_rows(&rows).expect("row lengths agree by construction");
    CorrelationMatrix::new_unchecked(g)
}

/// Uniformly random permutation images (Fisher-Yates).
pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        images.swap(i, j);
    }
    images
}

/// Exact doubly stochastic matrix: a convex combination of `terms` random
/// permutation matrices with positive dyadic weights normalized to sum to
/// one exactly (Birkhoff form).
pub fn birkhoff<R: Rng>(
    rng: &mut R,
    n: usize,
    terms: usize,
    bits: u32,
) -> DoublyStochasticMatrix<Rational> {
    let terms = terms.max(1);
    let raw: Vec<Rational> = (0..terms).map(|_| dyadic_positive(rng, bits)).collect();
    let total: Rational = raw.iter().sum();
    let mut m = SquareMatrix::<Rational>::new(n, vec![Rational::zero(); n * n])
        .expect("square by construction");
    for w in &raw {
        let weight = w / &total;
        let images = random_permutation(rng, n);
        for (i, &j) in images.iter().enumerate() {
            m.set(i, j, m.at(i, j) + &weight);
        }
    }
    DoublyStochasticMatrix::new(m).expect("convex combination of permutations")
}

/// Sinkhorn normalization of a strictly positive real matrix with an
/// exact result.  The alternating row/column sweeps run in f64 (running
/// them in rationals blows denominators up exponentially); the converged
/// iterate is then snapped to dyadic rationals and repaired exactly: one
/// rational row normalization makes row sums one, and the rank-one shift
/// `b_ij - (c_j - 1)/n` makes column sums one while keeping row sums
/// (the column defects sum to zero).  Fails if the input has a
/// nonpositive entry or the repair would push an entry negative (too few
/// rounds).
pub fn sinkhorn(
    a: &SquareMatrix<Rational>,
    rounds: usize,
) -> Result<DoublyStochasticMatrix<Rational>> {
    let n = a.size();
    if n == 0 {
        return Err(Error::Invalid("sinkhorn needs a nonempty matrix".to_string()));
    }
    let mut f = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            let e = a.at(i, j);
            if !e.is_positive() {
                return Err(Error::Invalid(format!(
                    "sinkhorn needs strictly positive entries; ({i},{j}) = {e}"
                )));
            }
            f[i * n + j] = rational_to_f64(e);
        }
    }
    for _ in 0..rounds.max(1) {
        for i in 0..n {
            let s: f64 = f[i * n..(i + 1) * n].iter().sum();
            for j in 0..n {
                f[i * n + j] /= s;
            }
        }
        for j in 0..n {
            let s: f64 = (0..n).map(|i| f[i * n + j]).sum();
            for i in 0..n {
                f[i * n + j] /= s;
            }
        }
    }
    // dyadic snap, then the exact two-step repair
    let den: i64 = 1 << 30;
    let mut b = SquareMatrix::<Rational>::new(
        n,
        f.iter()
            .map(|x| Rational::new(BigInt::from((x * den as f64).round() as i64), BigInt::from(den)))
            .collect(),
    )
    .expect("square by construction");
    for i in 0..n {
        let s: Rational = (0..n).map(|j| b.at(i, j).clone()).sum();
        if !s.is_positive() {
            return Err(Error::NonConvergence(format!("row {i} collapsed to zero")));
        }
        for j in 0..n {
            b.set(i, j, b.at(i, j) / &s);
        }
    }
    let nn = Rational::from_integer(BigInt::from(n as i64));
    for j in 0..n {
        let defect = (0..n).map(|i| b.at(i, j).clone()).sum::<Rational>() - Rational::one();
        let shift = defect / &nn;
        for i in 0..n {
            let v = b.at(i, j) - &shift;
            if v.is_negative() {
                return Err(Error::NonConvergence(format!(
                    "sinkhorn repair made entry ({i},{j}) negative; run more rounds"
                )));
            }
            b.set(i, j, v);
        }
    }
    DoublyStochasticMatrix::new(b)
}

/// Round-trip a positive rational through f64 (entries here are small).
fn rational_to_f64(r: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::MAX)
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// phases of the R diagonal absorbed into Q.
pub fn haar_unitary<R: Rng>(rng: &mut R, n: usize) -> DMatrix<Complex<f64>> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex::new(standard_normal(rng), standard_normal(rng))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { Complex::new(1.0, 0.0) } else { d / d.norm() };
        for i in 0..n {
            q[(i, j)] *= phase.conj();
        }
    }
    q
}

/// Random skew-Hermitian matrix with independent Gaussian entries of the
/// given scale; `exp(S)` directions for local unitary refinement.
pub fn random_skew_hermitian<R: Rng>(rng: &mut R, n: usize, scale: f64) -> DMatrix<Complex<f64>> {
    let mut s = DMatrix::from_element(n, n, Complex::new(0.0, 0.0));
    for i in 0..n {
        s[(i, i)] = Complex::new(0.0, scale * standard_normal(rng));
        for j in i + 1..n {
            let z = Complex::new(scale * standard_normal(rng), scale * standard_normal(rng));
            s[(i, j)] = z;
            s[(j, i)] = -z.conj();
        }
    }
    s
}

/// Cayley transform `(I - S)(I + S)^(-1)` of a skew-Hermitian matrix:
/// exactly unitary in exact arithmetic, numerically unitary to rounding.
pub fn cayley_unitary(s: &DMatrix<Complex<f64>>) -> Result<DMatrix<Complex<f64>>> {
    let n = s.nrows();
    let id = DMatrix::identity(n, n);
    let plus = &id + s;
    let minus = &id - s;
    let inv = plus
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Invalid("I + S is singular".to_string()))?;
    Ok(minus * inv)
}

/// Box-Muller standard normal from a generic RNG.
pub(crate) fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random::<f64>();
        if u > 1e-300 {
            let v: f64 = rng.random::<f64>();
            return (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::factor::{psd_status, rank_exact};
    use crate::scalar::{Scalar, SignDecision};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn unit_vectors_have_exact_unit_norm() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for dim in 1..=4 {
            for _ in 0..5 {
                let v = real_unit_vector(&mut rng, dim, DYADIC_BITS);
                let norm: Rational = v.iter().map(|x| x * x).sum();
                assert!(norm.is_one(), "real norm {norm}");
                let w = complex_unit_vector(&mut rng, dim, DYADIC_BITS);
                let norm = GaussianRational::sum(w.iter().map(|z| z.conj().mul(z)));
                assert!(
                    norm.sub(&GaussianRational::one()).is_zero(),
                    "complex norm {norm}"
                );
            }
        }
    }

    #[test]
    fn correlation_gram_is_exact_correlation() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..5 {
            let c = correlation_gram(&mut rng, 5, 3, DYADIC_BITS);
            let m = c.as_matrix();
            assert!(m.is_hermitian());
            for i in 0..5 {
                assert!(
                    m.at(i, i).sub(&GaussianRational::one()).is_zero(),
                    "diagonal {i} is {}",
                    m.at(i, i)
                );
            }
            assert_ne!(psd_status(m).unwrap(), SignDecision::Negative);
            assert!(rank_exact(m).unwrap() <= 3);
            // revalidate through the checked constructor
            CorrelationMatrix::new(m.clone()).unwrap();
        }
        let real = real_correlation_gram(&mut rng, 4, 2, DYADIC_BITS);
        CorrelationMatrix::new(real.as_matrix().clone()).unwrap();
        assert!(rank_exact(real.as_matrix()).unwrap() <= 2);
    }

    #[test]
    fn samplers_are_deterministic_in_the_seed() {
        let run = |seed: u64| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let c = correlation_gram(&mut rng, 4, 2, DYADIC_BITS);
            let d = birkhoff(&mut rng, 4, 3, 8);
            let g = psd_gram(&mut rng, 3, 2, 5);
            (c.as_matrix().clone(), d.as_matrix().clone(), g)
        };
        assert_eq!(run(7), run(7));
        assert_ne!(run(7).0, run(8).0);
    }

    #[test]
    fn birkhoff_is_exactly_doubly_stochastic() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for n in 2..=5 {
            let d = birkhoff(&mut rng, n, 4, 10);
            // constructor validated; spot-check the sums anyway
            for s in d.as_matrix().row_sums() {
                assert!(s.is_one());
            }
            for s in d.as_matrix().col_sums() {
                assert!(s.is_one());
            }
        }
    }

    #[test]
    fn sinkhorn_normalizes_exactly() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let a = SquareMatrix::from_fn(4, |_, _| {
            Rational::new(BigInt::from(rng.random_range(1..=16i64)), BigInt::from(4))
        });
        let d = sinkhorn(&a, 6).unwrap();
        for s in d.as_matrix().row_sums() {
            assert!(s.is_one());
        }
        for s in d.as_matrix().col_sums() {
            assert!(s.is_one());
        }

        let bad = SquareMatrix::from_fn(2, |i, j| {
            Rational::from_integer(if i == j { BigInt::one() } else { BigInt::zero() })
        });
        assert!(sinkhorn(&bad, 2).is_err());
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let u = haar_unitary(&mut rng, 5);
        let gram = u.adjoint() * &u;
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)].re - expect).abs() < 1e-12);
                assert!(gram[(i, j)].im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cayley_of_skew_hermitian_is_unitary() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let s = random_skew_hermitian(&mut rng, 4, 0.3);
        let u = cayley_unitary(&s).unwrap();
        let gram = u.adjoint() * &u;
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)].re - expect).abs() < 1e-10);
                assert!(gram[(i, j)].im.abs() < 1e-10);
            }
        }
    }
}
