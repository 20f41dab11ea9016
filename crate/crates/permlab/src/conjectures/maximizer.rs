//! Seeded multi-start search for the maximizer of `f_A(X) = per(A o X)`
//! over correlation matrices `X`.
//!
//! The search runs two layers.  Exact candidates (`conj A`, the all-ones
//! matrix, the identity) are evaluated directly in the source field.
//! Float hill climbs then move Gram vectors on the unit sphere, and every
//! climb endpoint is snapped to a *rational* point of the sphere and
//! re-evaluated exactly, so the reported value and matrix never depend on
//! float arithmetic.

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::matrix::eigen::hermitian_eigenpairs;
use crate::matrix::{gram_from_rows, CorrelationMatrix, SquareMatrix};
use crate::permanent::permanent;
use crate::sampling::{standard_normal, stereographic_point};
use crate::scalar::{
    CyclotomicNumber, GaussianRational, Rational, Scalar, SignDecision, DEFAULT_PRECISION,
};

use super::lift_gaussian_matrix;

/// Denominator exponent used when snapping a float unit vector back onto
/// a rational point of the sphere.
const SNAP_BITS: u32 = 20;

/// Consecutive rejected proposals before the step size is halved.
const PATIENCE: u32 = 8;

/// Smallest step size; a climb stops once the step falls below this.
const MIN_STEP: f64 = 1e-8;

pub struct MaximizerResult<T: Scalar> {
    /// Best correlation matrix found; exact entries in the source field.
    pub matrix: CorrelationMatrix<T>,
    /// `per(A o X*)`, evaluated exactly.
    pub value: T,
    /// `per A`.
    pub baseline: T,
    /// True unless the search certifiably exceeded `per A`.
    pub compression: bool,
    /// Per restart, `per A - f(X)` at the start and after each accepted
    /// step; nonincreasing because only improvements are accepted.
    pub deficits: Vec<Vec<f64>>,
    pub restarts: usize,
    /// Float objective evaluations spent.
    pub evaluations: usize,
}

/// Full-rank Gram parameterization; see [`maximizer_search_with_rank`].
pub fn maximizer_search<T: Scalar>(
    a: &CorrelationMatrix<T>,
    budget: usize,
    seed: u64,
) -> Result<MaximizerResult<T>> {
    let rank = a.as_matrix().size().max(1);
    maximizer_search_with_rank(a, budget, seed, rank)
}

/// Search for a maximizer of `X -> per(A o X)` over correlation matrices,
/// parameterizing `X` as the Gram matrix of `n` unit vectors of the given
/// rank.  `budget` caps float objective evaluations across all restarts.
pub fn maximizer_search_with_rank<T: Scalar>(
    a: &CorrelationMatrix<T>,
    budget: usize,
    seed: u64,
    rank: usize,
) -> Result<MaximizerResult<T>> {
    let am = a.as_matrix();
    let n = am.size();
    if n > 7 {
        return Err(Error::SizeGuard(format!(
            "maximizer search is limited to n <= 7, got {n}"
        )));
    }
    if budget == 0 {
        return Err(Error::Invalid("search budget must be positive".to_string()));
    }
    if rank == 0 || rank > n {
        return Err(Error::Invalid(format!(
            "Gram rank must be in 1..={n}, got {rank}"
        )));
    }
    let baseline = permanent(am)?.value;

    // exact candidates first; ties keep the earlier candidate
    let mut best_matrix = am.conj_entries();
    let mut best_value = permanent(&am.hadamard(&best_matrix)?)?.value;
    for candidate in [SquareMatrix::<T>::all_ones(n), SquareMatrix::<T>::identity(n)] {
        let value = permanent(&am.hadamard(&candidate)?)?.value;
        if value.sub(&best_value).sign_real() == SignDecision::Positive {
            best_matrix = candidate;
            best_value = value;
        }
    }

    // complex Gram coordinates only if the field can hold them exactly
    let complex_route =
        T::from_cyclotomic(&CyclotomicNumber::from_gaussian(&GaussianRational::i())).is_ok();
    let dim = if complex_route { 2 * rank } else { rank };

    let af = float_matrix(am);
    let per_a_f = baseline.embed(DEFAULT_PRECISION).re_f64();

    let restarts = budget.div_ceil(160).min(8);
    let allotment = budget.div_ceil(restarts);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut deficits = Vec::with_capacity(restarts);
    let mut evaluations = 0usize;

    for restart in 0..restarts {
        let mut vectors = if restart == 0 {
            conjugate_gram_start(am, rank, complex_route)
                .unwrap_or_else(|| random_start(&mut rng, n, dim))
        } else {
            random_start(&mut rng, n, dim)
        };
        let mut gram = gram_f64(&vectors, complex_route);
        let mut value = objective(&af, &gram);
        evaluations += 1;
        let mut trajectory = vec![per_a_f - value];

        let mut step = 0.3;
        let mut rejections = 0u32;
        let mut spent = 1usize;
        while spent < allotment && step >= MIN_STEP {
            let i = rng.random_range(0..n);
            let mut proposal = vectors[i].clone();
            for c in proposal.iter_mut() {
                *c += step * standard_normal(&mut rng);
            }
            let norm = proposal.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm < 1e-12 {
                continue;
            }
            for c in proposal.iter_mut() {
                *c /= norm;
            }
            let mut candidate = gram.clone();
            for j in 0..n {
                let entry = inner(&proposal, &vectors[j], complex_route);
                candidate[(i, j)] = entry;
                candidate[(j, i)] = entry.conj();
            }
            candidate[(i, i)] = Complex::new(1.0, 0.0);
            let proposed = objective(&af, &candidate);
            evaluations += 1;
            spent += 1;
            if proposed > value {
                vectors[i] = proposal;
                gram = candidate;
                value = proposed;
                rejections = 0;
                trajectory.push(per_a_f - value);
            } else {
                rejections += 1;
                if rejections >= PATIENCE {
                    step *= 0.5;
                    rejections = 0;
                }
            }
        }
        deficits.push(trajectory);

        // snap the endpoint to an exact point of the sphere and re-verify
        let exact = snap_gram(&vectors, complex_route)?;
        let lifted = lift_into::<T>(&exact, complex_route)?;
        let exact_value = permanent(&am.hadamard(&lifted)?)?.value;
        if exact_value.sub(&best_value).sign_real() == SignDecision::Positive {
            best_matrix = lifted;
            best_value = exact_value;
        }
    }

    let compression = baseline.sub(&best_value).sign_real() != SignDecision::Negative;
    Ok(MaximizerResult {
        matrix: CorrelationMatrix::new_unchecked(best_matrix),
        value: best_value,
        baseline,
        compression,
        deficits,
        restarts,
        evaluations,
    })
}

/// Either a rational Gram matrix (real route) or a Gaussian-rational one.
enum ExactGram {
    Real(SquareMatrix<Rational>),
    Complex(SquareMatrix<GaussianRational>),
}

fn lift_into<T: Scalar>(gram: &ExactGram, _complex_route: bool) -> Result<SquareMatrix<T>> {
    match gram {
        ExactGram::Real(m) => Ok(m.map(T::from_rational)),
        ExactGram::Complex(m) => lift_gaussian_matrix::<T>(m),
    }
}

fn snap_gram(vectors: &[Vec<f64>], complex_route: bool) -> Result<ExactGram> {
    if complex_route {
        // coordinates come in (re, im) pairs
        let cols: Vec<Vec<GaussianRational>> = vectors
            .iter()
            .map(|w| {
                let x = snap_unit(w);
                (0..w.len() / 2)
                    .map(|j| GaussianRational::new(x[2 * j].clone(), x[2 * j + 1].clone()))
                    .collect()
            })
            .collect();
        let rank = cols[0].len();
        let rows: Vec<Vec<GaussianRational>> = (0..rank)
            .map(|r| cols.iter().map(|v| v[r].clone()).collect())
            .collect();
        Ok(ExactGram::Complex(gram_from_rows(&rows)?))
    } else {
        let cols: Vec<Vec<Rational>> = vectors.iter().map(|w| snap_unit(w)).collect();
        let rank = cols[0].len();
        let rows: Vec<Vec<Rational>> = (0..rank)
            .map(|r| cols.iter().map(|v| v[r].clone()).collect())
            .collect();
        Ok(ExactGram::Real(gram_from_rows(&rows)?))
    }
}

/// Nearest rational point of the unit sphere: pull the float vector back
/// through the stereographic chart, round the chart coordinates to
/// dyadics, and push forward exactly.
fn snap_unit(w: &[f64]) -> Vec<Rational> {
    let d = w.len();
    if d == 1 {
        let sign = if w[0] >= 0.0 { 1 } else { -1 };
        return vec![Rational::from_integer(BigInt::from(sign))];
    }
    let last = w[d - 1];
    if last > 1.0 - 1e-9 {
        // chart singularity: the point *is* the pole
        let mut out = vec![Rational::from_integer(BigInt::from(0)); d];
        out[d - 1] = Rational::from_integer(BigInt::from(1));
        return out;
    }
    let scale = 1.0 / (1.0 - last);
    let den: i64 = 1 << SNAP_BITS;
    let t: Vec<Rational> = w[..d - 1]
        .iter()
        .map(|&c| {
            let scaled = (c * scale * den as f64).round().clamp(-1e15, 1e15);
            Rational::new(BigInt::from(scaled as i64), BigInt::from(den))
        })
        .collect();
    stereographic_point(&t)
}

/// Gram vectors reproducing `conj A`, from the eigendecomposition of `A`;
/// needs the full-rank parameterization.
fn conjugate_gram_start<T: Scalar>(
    am: &SquareMatrix<T>,
    rank: usize,
    complex_route: bool,
) -> Option<Vec<Vec<f64>>> {
    let n = am.size();
    if rank != n {
        return None;
    }
    let (spectrum, u) = hermitian_eigenpairs(am, DEFAULT_PRECISION).ok()?;
    let mut vectors = Vec::with_capacity(n);
    for i in 0..n {
        let mut w = Vec::with_capacity(if complex_route { 2 * n } else { n });
        for k in 0..n {
            let c = u[(i, k)] * spectrum.values[k].max(0.0).sqrt();
            w.push(c.re);
            if complex_route {
                w.push(c.im);
            }
        }
        let norm = w.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 1e-9) {
            return None;
        }
        for c in w.iter_mut() {
            *c /= norm;
        }
        vectors.push(w);
    }
    Some(vectors)
}

fn random_start<R: Rng>(rng: &mut R, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| loop {
            let w: Vec<f64> = (0..dim).map(|_| standard_normal(rng)).collect();
            let norm = w.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm > 1e-9 {
                return w.into_iter().map(|c| c / norm).collect();
            }
        })
        .collect()
}

fn float_matrix<T: Scalar>(am: &SquareMatrix<T>) -> DMatrix<Complex<f64>> {
    let n = am.size();
    DMatrix::from_fn(n, n, |i, j| {
        let e = am.at(i, j).embed(DEFAULT_PRECISION);
        Complex::new(e.re_f64(), e.im_f64())
    })
}

fn inner(u: &[f64], v: &[f64], complex_route: bool) -> Complex<f64> {
    if complex_route {
        let mut acc = Complex::new(0.0, 0.0);
        for k in (0..u.len()).step_by(2) {
            acc += Complex::new(u[k], u[k + 1]).conj() * Complex::new(v[k], v[k + 1]);
        }
        acc
    } else {
        Complex::new(u.iter().zip(v).map(|(a, b)| a * b).sum(), 0.0)
    }
}

fn gram_f64(vectors: &[Vec<f64>], complex_route: bool) -> DMatrix<Complex<f64>> {
    let n = vectors.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex::new(1.0, 0.0)
        } else {
            inner(&vectors[i], &vectors[j], complex_route)
        }
    })
}

fn objective(af: &DMatrix<Complex<f64>>, x: &DMatrix<Complex<f64>>) -> f64 {
    let n = af.nrows();
    let product = DMatrix::from_fn(n, n, |i, j| af[(i, j)] * x[(i, j)]);
    per_f64(&product).re
}

/// Gray-code Ryser permanent in plain f64 complex arithmetic; the float
/// screening engine behind the hill climbs.
pub(crate) fn per_f64(m: &DMatrix<Complex<f64>>) -> Complex<f64> {
    let n = m.nrows();
    if n == 0 {
        return Complex::new(1.0, 0.0);
    }
    debug_assert!(n <= 63);
    let mut sums = vec![Complex::new(0.0, 0.0); n];
    let mut total = Complex::new(0.0, 0.0);
    let mut prev: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let gray = k ^ (k >> 1);
        let bit = (gray ^ prev).trailing_zeros() as usize;
        if gray & (1 << bit) != 0 {
            for (i, s) in sums.iter_mut().enumerate() {
                *s += m[(i, bit)];
            }
        } else {
            for (i, s) in sums.iter_mut().enumerate() {
                *s -= m[(i, bit)];
            }
        }
        prev = gray;
        let product = sums.iter().fold(Complex::new(1.0, 0.0), |p, s| p * s);
        if (n as u32 - gray.count_ones()) % 2 == 0 {
            total += product;
        } else {
            total -= product;
        }
    }
    total
}
