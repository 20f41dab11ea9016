//! Schur power matrices: the n!×n! matrix `π(A)` indexed by permutations in
//! lexicographic order, with entries `s_{αβ} = Π_t a_{α(t)β(t)}`.
//!
//! `π(A)` is materialized densely for n ≤ 5 and applied matrix-free for
//! n ≤ 7. Spectral analysis is float-based but certified: eigenvalue
//! brackets come with rigorous error radii, so a reported sign (for example
//! a negative `per A − λ_max` margin) is a proof, not an estimate.
//!
//! Key structural facts used throughout:
//!   * every row sum of `π(A)` equals `per A`;
//!   * `π(A)` is Hermitian (and PSD) whenever `A` is, being a principal
//!     submatrix of the n-fold tensor power `⊗ⁿA`;
//!   * if `A = G*G` for a k×n factor `G`, then `π(A) = W*W` where
//!     `W[r][α] = Π_t G[r_t][α(t)]` over `r ∈ [k]^n`, so the nonzero
//!     spectrum of `π(A)` equals that of the small k^n×k^n Gram matrix
//!     `W W*` — a fast independent route to rank and extreme eigenvalues.

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::conjectures::{CheckerName, ConjectureReport, InputSummary, Reported};
use crate::error::{Error, Result};
use crate::matrix::eigen::{
    certified_sym_eigen, eigenvalues_hermitian, hermitian_eigenpairs, to_complex64,
    CertifiedReal,
};
use crate::matrix::factor::{det_bareiss, psd_status, rank_exact};
use crate::matrix::{gram_from_rows, SquareMatrix};
use crate::perm::{factorial, Permutation};
use crate::permanent::permanent;
use crate::scalar::{Scalar, SignDecision, DEFAULT_PRECISION};

/// Largest n for which the dense n!×n! form is materialized.
pub const DENSE_LIMIT: usize = 5;
/// Largest n for which the matrix-free operator form is available.
pub const OPERATOR_LIMIT: usize = 7;
/// Largest k^n for the float Gram-compression spectrum.
pub const COMPRESSION_LIMIT: usize = 16_384;
/// Largest k^n for the exact compressed Gram matrix.
pub const EXACT_COMPRESSION_LIMIT: usize = 512;
/// Seed for iterative spectral routines when the caller does not supply one.
pub const DEFAULT_SPECTRAL_SEED: u64 = 0x5350_4f57;
/// Iteration budget for power iterations under the default entry points.
pub const DEFAULT_POWER_BUDGET: usize = 4000;

/// Relative Rayleigh-bracket width declaring power-iteration convergence.
const POWER_RTOL: f64 = 1e-9;
const EPS: f64 = f64::EPSILON;
/// Rows per parallel work unit in the operator matvec (fixed, so the
/// accumulation order never depends on the worker count).
const ROW_CHUNK: usize = 64;

/// `π(A)` with a precomputed lexicographic permutation table. The dense
/// matrix is kept only for n ≤ [`DENSE_LIMIT`]; the operator form applies
/// entries on the fly.
#[derive(Clone, Debug)]
pub struct SchurPower<T: Scalar> {
    a: SquareMatrix<T>,
    perms: Vec<Permutation>,
    dense: Option<SquareMatrix<T>>,
}

/// Certified spectral digest of `π(A)` for Hermitian `A`.
#[derive(Clone, Debug)]
pub struct SpectralSummary<T: Scalar> {
    pub lambda_max: CertifiedReal,
    pub lambda_min: CertifiedReal,
    /// Numerical rank (exact rank when the dense exact form is small enough).
    pub rank: usize,
    /// `per A` in the source field.
    pub per_value: T,
    /// `per A − λ_max`; negative beyond its radius refutes the
    /// permanent-on-top inequality for this matrix.
    pub pot_margin: CertifiedReal,
}

/// Rayleigh-quotient samples of the numerical range of a matrix.
#[derive(Clone, Debug)]
pub struct NumericalRangeSample {
    /// `(re, im)` of `x*Mx / x*x` for seeded random unit vectors `x`.
    pub points: Vec<(f64, f64)>,
    pub real_range: (f64, f64),
    pub imag_range: (f64, f64),
    /// Uniform radius covering rounding and embedding error per point.
    pub err: f64,
}

/// Builds `π(A)`: dense through [`DENSE_LIMIT`], operator form through
/// [`OPERATOR_LIMIT`].
pub fn schur_power<T: Scalar>(a: &SquareMatrix<T>) -> Result<SchurPower<T>> {
    if a.size() <= DENSE_LIMIT {
        SchurPower::dense(a)
    } else {
        SchurPower::operator(a)
    }
}

fn lex_table(n: usize) -> Vec<Permutation> {
    (0..factorial(n))
        .map(|r| Permutation::from_lex_rank(n, r).expect("rank below n!"))
        .collect()
}

impl<T: Scalar> SchurPower<T> {
    /// Materializes the full n!×n! matrix (n ≤ [`DENSE_LIMIT`]).
    pub fn dense(a: &SquareMatrix<T>) -> Result<Self> {
        let n = a.size();
        if n == 0 {
            return Err(Error::Invalid("empty matrix".to_string()));
        }
        if n > DENSE_LIMIT {
            return Err(Error::SizeGuard(format!(
                "dense Schur power holds {n}!×{n}! entries; limit is n <= {DENSE_LIMIT}"
            )));
        }
        let perms = lex_table(n);
        let dense = SquareMatrix::from_fn(perms.len(), |r, c| {
            product_entry(a, perms[r].images(), perms[c].images())
        });
        Ok(SchurPower {
            a: a.clone(),
            perms,
            dense: Some(dense),
        })
    }

    /// Matrix-free form: entries computed on demand (n ≤ [`OPERATOR_LIMIT`]).
    pub fn operator(a: &SquareMatrix<T>) -> Result<Self> {
        let n = a.size();
        if n == 0 {
            return Err(Error::Invalid("empty matrix".to_string()));
        }
        if n > OPERATOR_LIMIT {
            return Err(Error::SizeGuard(format!(
                "operator Schur power is limited to n <= {OPERATOR_LIMIT}, got {n}"
            )));
        }
        Ok(SchurPower {
            a: a.clone(),
            perms: lex_table(n),
            dense: None,
        })
    }

    pub fn source(&self) -> &SquareMatrix<T> {
        &self.a
    }

    /// Degree n of the source matrix.
    pub fn degree(&self) -> usize {
        self.a.size()
    }

    /// Side length n! of `π(A)`.
    pub fn dim(&self) -> usize {
        self.perms.len()
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    /// The lexicographic index: `permutations()[i]` has lex rank i.
    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn dense_matrix(&self) -> Option<&SquareMatrix<T>> {
        self.dense.as_ref()
    }

    /// `s_{αβ} = Π_t a_{α(t)β(t)}` by permutation indices.
    pub fn entry(&self, alpha: usize, beta: usize) -> T {
        if let Some(d) = &self.dense {
            return d.at(alpha, beta).clone();
        }
        product_entry(&self.a, self.perms[alpha].images(), self.perms[beta].images())
    }

    /// All n! row sums, each mathematically equal to `per A`. Dense forms
    /// sum materialized entries; the operator form recomputes every entry,
    /// which costs O((n!)²·n) multiplications — fine for n ≤ 5, expensive in
    /// exact arithmetic at n = 7 (prefer [`Self::row_sum_single`] spot checks
    /// plus [`Self::certified_row_sums`] there).
    pub fn row_sums(&self) -> Vec<T> {
        match &self.dense {
            Some(d) => d.row_sums(),
            None => (0..self.dim()).map(|r| self.row_sum_single(r)).collect(),
        }
    }

    /// One exact row sum by direct summation of the n! row entries. This is
    /// an independent check against `per A`: it sums the permutation
    /// expansion term by term, sharing no arithmetic with the
    /// inclusion-exclusion permanent engines.
    pub fn row_sum_single(&self, alpha: usize) -> T {
        let row = self.perms[alpha].images();
        T::sum(
            self.perms
                .iter()
                .map(|beta| product_entry(&self.a, row, beta.images())),
        )
    }

    /// All n! row sums in certified floating point: one all-ones matvec
    /// through the operator kernel, plus a uniform error radius.
    pub fn certified_row_sums(&self) -> (Vec<Complex<f64>>, f64) {
        let kernel = self.kernel();
        let dim = self.dim();
        let ones = vec![Complex::new(1.0, 0.0); dim];
        let mut y = vec![Complex::new(0.0, 0.0); dim];
        let mut abs = vec![0.0f64; dim];
        kernel.apply(&ones, &mut y, &mut abs);
        let max_abs = abs.iter().fold(0.0f64, |m, &v| m.max(v));
        let bound = kernel.component_bound(max_abs, dim as f64);
        (y, bound)
    }

    /// `y = π(A)·x` in certified floating point; returns the image and a
    /// uniform per-component error radius.
    pub fn apply_float(&self, x: &[Complex<f64>]) -> Result<(Vec<Complex<f64>>, f64)> {
        let dim = self.dim();
        if x.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "vector has length {}, operator has side {dim}",
                x.len()
            )));
        }
        let kernel = self.kernel();
        let mut y = vec![Complex::new(0.0, 0.0); dim];
        let mut abs = vec![0.0f64; dim];
        kernel.apply(x, &mut y, &mut abs);
        let max_abs = abs.iter().fold(0.0f64, |m, &v| m.max(v));
        let l1x = x.iter().map(|c| c.norm()).sum::<f64>();
        Ok((y, kernel.component_bound(max_abs, l1x)))
    }

    fn kernel(&self) -> FloatKernel<'_> {
        FloatKernel::new(&self.a, &self.perms)
    }

    /// Certified spectral digest with the default seed and iteration budget.
    pub fn spectral_summary(&self) -> Result<SpectralSummary<T>> {
        self.spectral_summary_with(DEFAULT_SPECTRAL_SEED, DEFAULT_POWER_BUDGET)
    }

    /// Certified spectral digest of `π(A)` for Hermitian `A`.
    ///
    /// Dense form: one certified eigensolve supplies both extremes and the
    /// rank (exact elimination rank when the field is exact and n ≤ 4).
    /// Operator form: λ_max by seeded power iteration with a rigorous
    /// Rayleigh bracket; λ_min is exactly 0 when the source is exact PSD of
    /// rank k with k^n < n! (then `π(A)` is PSD of rank ≤ k^n), otherwise a
    /// shifted power iteration; the rank comes from the Gram-compression
    /// spectrum, which requires a PSD source.
    pub fn spectral_summary_with(&self, seed: u64, budget: usize) -> Result<SpectralSummary<T>> {
        if !self.a.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        let per = permanent(&self.a)?.value;
        let per_emb = per.embed(DEFAULT_PRECISION);
        let per_f = per_emb.re_f64();
        // per of a Hermitian matrix is real: fold any residual imaginary
        // part into the radius rather than trusting it away
        let per_err = per_emb.error() + per_emb.im_f64().abs() + per_f.abs() * 2f64.powi(-50);

        let (lambda_max, lambda_min, rank) = match &self.dense {
            Some(d) => {
                let spec = eigenvalues_hermitian(d, DEFAULT_PRECISION)?;
                let rank = if T::EXACT && self.degree() <= 4 {
                    rank_exact(d)?
                } else {
                    spec.rank_by_threshold()
                };
                (
                    CertifiedReal::new(spec.lambda_max(), spec.bound),
                    CertifiedReal::new(spec.lambda_min(), spec.bound),
                    rank,
                )
            }
            None => {
                let kernel = self.kernel();
                let top = power_iterate(&kernel, None, &[], seed, budget);
                if !top.converged {
                    return Err(Error::NonConvergence(format!(
                        "lambda_max power iteration: best bracket {} ± {:.3e} after {} iterations",
                        top.value,
                        top.residual + top.rounding,
                        top.iterations
                    )));
                }
                let lmax = CertifiedReal::new(top.value, top.residual + top.rounding);
                let lmin = self.operator_lambda_min(&kernel, seed, budget)?;
                // a PD source keeps ⊗ⁿA and hence its principal submatrix
                // π(A) PD: full rank without any compression
                let rank = if psd_status(&self.a)? == SignDecision::Positive {
                    self.dim()
                } else {
                    self.compression_spectrum()?.rank_by_threshold()
                };
                (lmax, lmin, rank)
            }
        };

        Ok(SpectralSummary {
            lambda_max,
            lambda_min,
            rank,
            per_value: per,
            pot_margin: CertifiedReal::new(per_f - lambda_max.value, per_err + lambda_max.err),
        })
    }

    /// λ_min in operator form: exactly 0 for an exact PSD source whose rank
    /// k satisfies k^n < n!, else a shifted power iteration on `σI − π(A)`
    /// with σ an upper bound on the spectral radius (largest absolute row
    /// sum of `π(A)`).
    fn operator_lambda_min(
        &self,
        kernel: &FloatKernel<'_>,
        seed: u64,
        budget: usize,
    ) -> Result<CertifiedReal> {
        if T::EXACT && psd_status(&self.a)? != SignDecision::Negative {
            let k = rank_exact(&self.a)? as u64;
            let shrinks = k
                .checked_pow(self.degree() as u32)
                .map(|kn| kn < self.dim() as u64)
                .unwrap_or(false);
            if shrinks {
                // π(A) is a principal submatrix of ⊗ⁿA, hence PSD, and
                // rank π(A) ≤ (rank A)^n < n! forces a zero eigenvalue.
                return Ok(CertifiedReal::exact(0.0));
            }
        }
        let sigma = kernel.abs_row_sum_bound();
        let out = power_iterate(kernel, Some(sigma), &[], seed ^ 0x9e37_79b9_7f4a_7c15, budget);
        if !out.converged {
            return Err(Error::NonConvergence(format!(
                "lambda_min shifted iteration: best bracket {} ± {:.3e} after {} iterations",
                out.value,
                out.residual + out.rounding,
                out.iterations
            )));
        }
        Ok(CertifiedReal::new(out.value, out.residual + out.rounding))
    }

    /// Runs the seeded power iteration and returns the final unit iterate
    /// together with its certified Rayleigh bracket. The vector is the
    /// operator's reconstructed top-eigenvector witness: `x*π(A)x` exceeds
    /// `per A · x*x` exactly when the permanent-on-top inequality fails.
    pub fn top_eigenvector(
        &self,
        seed: u64,
        budget: usize,
    ) -> Result<(Vec<Complex<f64>>, CertifiedReal)> {
        let kernel = self.kernel();
        let out = power_iterate(&kernel, None, &[], seed, budget);
        if !out.converged {
            return Err(Error::NonConvergence(format!(
                "power iteration: best bracket {} ± {:.3e} after {} iterations",
                out.value,
                out.residual + out.rounding,
                out.iterations
            )));
        }
        Ok((
            out.vector,
            CertifiedReal::new(out.value, out.residual + out.rounding),
        ))
    }

    /// Full certified spectrum of `π(A)` for a PSD source via Gram
    /// compression: factor `A ≈ G*G` from the certified eigensolve of `A`,
    /// build `W[r][α] = Π_t G[r_t][α(t)]`, and read the nonzero spectrum of
    /// `π(A)` off the small `W W*`. The remaining n! − k^n eigenvalues are
    /// exactly zero. The returned bound folds together the eigensolve
    /// residuals and the factorization/rounding perturbation chain.
    pub fn compression_spectrum(&self) -> Result<crate::matrix::eigen::CertifiedSpectrum> {
        let n = self.degree();
        let dim = self.dim();
        let (sa, vecs) = hermitian_eigenpairs(&self.a, DEFAULT_PRECISION)?;
        if sa.psd_classification() == SignDecision::Negative {
            return Err(Error::NotPsd(
                "Gram compression factors exist only for PSD sources".to_string(),
            ));
        }
        let k = if T::EXACT {
            rank_exact(&self.a)?
        } else {
            sa.rank_by_threshold()
        };
        let rows = (k as u64)
            .checked_pow(n as u32)
            .filter(|&r| r <= COMPRESSION_LIMIT as u64)
            .ok_or_else(|| {
                Error::SizeGuard(format!(
                    "compression needs rank^n = {k}^{n} <= {COMPRESSION_LIMIT}"
                ))
            })? as usize;
        if rows >= dim {
            return Err(Error::SizeGuard(format!(
                "rank^n = {rows} does not compress below n! = {dim}"
            )));
        }
        let scale_a = sa.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if k == 0 {
            // the source is (certified) zero, so every product entry is too
            let ma = self.a.max_entry_modulus().max(1e-300);
            let delta = sa.bound + 1e-300;
            let bound =
                dim as f64 * n as f64 * delta * (ma + delta).powi(n as i32 - 1) + 1e-300;
            return Ok(crate::matrix::eigen::CertifiedSpectrum {
                values: vec![0.0; dim],
                bound,
            });
        }
        // k×n factor from the top-k eigenpairs; dropped eigenvalues are
        // certified ≈ 0 and folded into the perturbation radius
        let mut g = vec![Complex::new(0.0, 0.0); k * n];
        let mut dropped = 0.0f64;
        for v in sa.values.iter().take(n - k) {
            dropped += v.abs();
        }
        for r in 0..k {
            let idx = n - k + r;
            let s = sa.values[idx].max(0.0).sqrt();
            for i in 0..n {
                g[r * n + i] = vecs[(i, idx)].conj().scale(s);
            }
        }
        // |A − G*G|₂ ≤ eigensolve bound + dropped tail + G rounding
        let delta_a = sa.bound + dropped + 64.0 * EPS * scale_a + 1e-300;

        let mut w = vec![Complex::new(0.0, 0.0); rows * dim];
        for (ridx, wrow) in w.chunks_mut(dim).enumerate() {
            for (col, beta) in self.perms.iter().enumerate() {
                let mut p = Complex::new(1.0, 0.0);
                let mut rest = ridx;
                // digits of ridx in base k, most significant first
                let mut radix = rows / k;
                for t in 0..n {
                    let digit = rest / radix;
                    rest %= radix;
                    if radix > 1 {
                        radix /= k;
                    }
                    p *= g[digit * n + beta.images()[t]];
                }
                wrow[col] = p;
            }
        }
        let normsq: Vec<f64> = w
            .chunks(dim)
            .map(|row| row.iter().map(|c| c.norm_sqr()).sum::<f64>())
            .collect();
        let max_normsq = normsq.iter().fold(0.0f64, |m, &v| m.max(v));
        let fw = normsq.iter().sum::<f64>().sqrt();

        let m = DMatrix::from_fn(rows, rows, |r, s| {
            let (a, b) = (&w[r * dim..(r + 1) * dim], &w[s * dim..(s + 1) * dim]);
            let mut acc = Complex::new(0.0, 0.0);
            for i in 0..dim {
                acc += a[i] * b[i].conj();
            }
            acc
        });
        // entry rounding in M: dot of dim terms, each a product of 2n
        // rounded factors; Cauchy–Schwarz caps the abs mass by max ‖W_r‖²
        let m_entry_err = (dim as f64 + 4.0 * n as f64 + 16.0) * EPS * max_normsq;
        let (mspec, _) = certified_sym_eigen(&m, m_entry_err)?;

        // W vs the exact products of G: ‖ΔW‖_F ≤ n·eps·‖W‖_F, so the Gram
        // matrix moves by ≤ 2‖W‖·‖ΔW‖ + ‖ΔW‖²
        let dw = n as f64 * EPS * fw * 1.1;
        let chain_w = 2.0 * fw * dw + dw * dw;
        // π(A) vs π(G*G): entrywise n·δ·max^{n−1}, times dim for the 2-norm
        let ma = self.a.max_entry_modulus().max(1e-300);
        let chain_pi =
            dim as f64 * n as f64 * delta_a * (ma + delta_a).powi(n as i32 - 1);
        let bound = mspec.bound + chain_w + chain_pi;

        let mut values = vec![0.0f64; dim - rows];
        values.extend(mspec.values.iter().copied());
        values.sort_by(|a, b| a.total_cmp(b));
        Ok(crate::matrix::eigen::CertifiedSpectrum { values, bound })
    }

    /// Exact compressed Gram matrix `M = W W*` for a supplied exact
    /// factorization `A = G*G` (`rows` are the k rows of `G`). The nonzero
    /// spectrum of `π(A)` equals that of `M`, and `rank π(A) = rank M` —
    /// both now questions about a k^n×k^n exact matrix.
    pub fn compressed_gram(&self, rows: &[Vec<T>]) -> Result<SquareMatrix<T>> {
        let n = self.degree();
        let built = gram_from_rows(rows)?;
        if built != self.a {
            return Err(Error::Invalid(
                "rows are not an exact Gram factorization of the source matrix".to_string(),
            ));
        }
        let k = rows.len();
        let count = (k as u64)
            .checked_pow(n as u32)
            .filter(|&r| r <= EXACT_COMPRESSION_LIMIT as u64)
            .ok_or_else(|| {
                Error::SizeGuard(format!(
                    "exact compression needs k^n = {k}^{n} <= {EXACT_COMPRESSION_LIMIT}"
                ))
            })? as usize;
        let dim = self.dim();
        // W[r][α] = Π_t G[r_t][α(t)]
        let mut w = Vec::with_capacity(count * dim);
        for ridx in 0..count {
            for beta in &self.perms {
                let mut p = T::one();
                let mut rest = ridx;
                let mut radix = count / k;
                for t in 0..n {
                    let digit = rest / radix;
                    rest %= radix;
                    if radix > 1 {
                        radix /= k;
                    }
                    p = p.mul(&rows[digit][beta.images()[t]]);
                    if p.is_zero() && T::EXACT {
                        break;
                    }
                }
                w.push(p);
            }
        }
        Ok(SquareMatrix::from_fn(count, |r, s| {
            T::sum(
                (0..dim).map(|i| w[r * dim + i].mul(&w[s * dim + i].conj())),
            )
        }))
    }

    /// Rayleigh-quotient samples of `W(π(A))` through the operator kernel.
    pub fn numerical_range(&self, count: usize, seed: u64) -> Result<NumericalRangeSample> {
        if count == 0 {
            return Err(Error::Invalid("sample count must be at least 1".to_string()));
        }
        let kernel = self.kernel();
        let dim = self.dim();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut points = Vec::with_capacity(count);
        let mut err = 0.0f64;
        let mut y = vec![Complex::new(0.0, 0.0); dim];
        let mut abs = vec![0.0f64; dim];
        for _ in 0..count {
            let x = random_unit(&mut rng, dim);
            kernel.apply(&x, &mut y, &mut abs);
            let mut r = Complex::new(0.0, 0.0);
            let mut dot_abs = 0.0f64;
            for i in 0..dim {
                r += x[i].conj() * y[i];
                dot_abs += x[i].norm() * y[i].norm();
            }
            let max_abs = abs.iter().fold(0.0f64, |m, &v| m.max(v));
            let l1x = x.iter().map(|c| c.norm()).sum::<f64>();
            let e = kernel.component_bound(max_abs, l1x) * (dim as f64).sqrt()
                + 4.0 * dim as f64 * EPS * (dot_abs + r.norm() + 1.0);
            err = err.max(e);
            points.push((r.re, r.im));
        }
        Ok(summarize_range(points, err))
    }
}

/// `Π_t a[alpha(t)][beta(t)]` with an early exit on exact zeros.
fn product_entry<T: Scalar>(a: &SquareMatrix<T>, alpha: &[usize], beta: &[usize]) -> T {
    let mut p = T::one();
    for t in 0..alpha.len() {
        p = p.mul(a.at(alpha[t], beta[t]));
        if T::EXACT && p.is_zero() {
            return p;
        }
    }
    p
}

/// Verifies that `det A` is the smallest eigenvalue of `π(A)` for PSD `A`:
/// reports equality of the certified λ_min bracket with the exact
/// determinant.
pub fn smallest_eigen_is_det<T: Scalar>(a: &SquareMatrix<T>) -> Result<ConjectureReport> {
    if psd_status(a)? == SignDecision::Negative {
        return Err(Error::NotPsd(
            "the smallest-eigenvalue identity applies to PSD matrices".to_string(),
        ));
    }
    let det = det_bareiss(a)?;
    let sp = schur_power(a)?;
    let lmin = match sp.dense_matrix() {
        Some(d) => {
            let spec = eigenvalues_hermitian(d, DEFAULT_PRECISION)?;
            CertifiedReal::new(spec.lambda_min(), spec.bound)
        }
        None => {
            let kernel = sp.kernel();
            sp.operator_lambda_min(&kernel, DEFAULT_SPECTRAL_SEED, DEFAULT_POWER_BUDGET)?
        }
    };
    Ok(ConjectureReport::from_certified(
        CheckerName::SmallestEigenIsDet,
        InputSummary::of_matrix(a),
        Reported::from_certified(lmin.value, lmin.err),
        Reported::from_scalar(&det),
        true,
    ))
}

/// Rayleigh-quotient samples of the numerical range of an arbitrary square
/// matrix (use [`SchurPower::numerical_range`] for matrix-free `π(A)`).
pub fn numerical_range_sample<T: Scalar>(
    m: &SquareMatrix<T>,
    count: usize,
    seed: u64,
) -> Result<NumericalRangeSample> {
    if count == 0 {
        return Err(Error::Invalid("sample count must be at least 1".to_string()));
    }
    let dim = m.size();
    if dim == 0 {
        return Err(Error::Invalid("empty matrix".to_string()));
    }
    let (f, entry_err) = to_complex64(m, DEFAULT_PRECISION);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    let mut err = 0.0f64;
    for _ in 0..count {
        let x = random_unit(&mut rng, dim);
        let mut r = Complex::new(0.0, 0.0);
        let mut abs_mass = 0.0f64;
        for i in 0..dim {
            let mut yi = Complex::new(0.0, 0.0);
            let mut ai = 0.0f64;
            for j in 0..dim {
                yi += f[(i, j)] * x[j];
                ai += f[(i, j)].norm() * x[j].norm();
            }
            r += x[i].conj() * yi;
            abs_mass += x[i].norm() * ai;
        }
        // |x*Δx| ≤ ‖Δ‖₂ ≤ dim·entry_err for the embedding; rounding is a
        // dot product of dim² terms over the accumulated absolute mass
        let e = dim as f64 * entry_err + 4.0 * (dim as f64 + 2.0) * EPS * (abs_mass + 1.0);
        err = err.max(e);
        points.push((r.re, r.im));
    }
    Ok(summarize_range(points, err))
}

fn summarize_range(points: Vec<(f64, f64)>, err: f64) -> NumericalRangeSample {
    let fold = |pick: fn(&(f64, f64)) -> f64| {
        points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(pick(p)), hi.max(pick(p)))
        })
    };
    let real_range = fold(|p| p.0);
    let imag_range = fold(|p| p.1);
    NumericalRangeSample {
        points,
        real_range,
        imag_range,
        err,
    }
}

fn random_unit(rng: &mut ChaCha20Rng, dim: usize) -> Vec<Complex<f64>> {
    loop {
        let x: Vec<Complex<f64>> = (0..dim)
            .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let nrm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 1e-3 {
            return x.iter().map(|c| c.scale(1.0 / nrm)).collect();
        }
    }
}

/// Embedded source matrix plus the lex table: everything the matrix-free
/// `y = π(A)x` needs. Each row α walks all β in lexicographic order via a
/// depth-first scan over unused columns, sharing prefix products, so a row
/// costs Σ_k n!/k! multiplications instead of n!·n. Rows are written
/// independently in fixed chunks, making the result bitwise independent of
/// the worker count.
struct FloatKernel<'a> {
    n: usize,
    af: Vec<Complex<f64>>,
    perms: &'a [Permutation],
    entry_err: f64,
    max_abs: f64,
    /// factorials 0!..n! for zero-prefix subtree skips
    fact: Vec<usize>,
}

struct RowState {
    acc: Complex<f64>,
    abs: f64,
    leaf: usize,
}

impl<'a> FloatKernel<'a> {
    fn new<T: Scalar>(a: &SquareMatrix<T>, perms: &'a [Permutation]) -> Self {
        let n = a.size();
        let (f, entry_err) = to_complex64(a, DEFAULT_PRECISION);
        let mut af = Vec::with_capacity(n * n);
        let mut max_abs = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let c = f[(i, j)];
                max_abs = max_abs.max(c.norm());
                af.push(c);
            }
        }
        let mut fact = vec![1usize; n + 1];
        for k in 1..=n {
            fact[k] = fact[k - 1] * k;
        }
        FloatKernel {
            n,
            af,
            perms,
            entry_err,
            max_abs,
            fact,
        }
    }

    fn dim(&self) -> usize {
        self.perms.len()
    }

    /// `y = π(A)x`; `abs[α]` accumulates Σ_β Π_t|a|·|x_β|, the absolute mass
    /// behind `y[α]`, from which rounding bounds follow.
    fn apply(&self, x: &[Complex<f64>], y: &mut [Complex<f64>], abs: &mut [f64]) {
        y.par_chunks_mut(ROW_CHUNK)
            .zip(abs.par_chunks_mut(ROW_CHUNK))
            .enumerate()
            .for_each(|(ci, (yc, ac))| {
                let base = ci * ROW_CHUNK;
                for t in 0..yc.len() {
                    let (v, a) = self.row_apply(base + t, x);
                    yc[t] = v;
                    ac[t] = a;
                }
            });
    }

    fn row_apply(&self, row: usize, x: &[Complex<f64>]) -> (Complex<f64>, f64) {
        let alpha = self.perms[row].images();
        let mut st = RowState {
            acc: Complex::new(0.0, 0.0),
            abs: 0.0,
            leaf: 0,
        };
        self.descend(alpha, x, &mut st, 0, 0, Complex::new(1.0, 0.0), 1.0);
        debug_assert_eq!(st.leaf, self.dim());
        (st.acc, st.abs)
    }

    fn descend(
        &self,
        alpha: &[usize],
        x: &[Complex<f64>],
        st: &mut RowState,
        t: usize,
        used: u32,
        prefix: Complex<f64>,
        prefix_abs: f64,
    ) {
        if t == self.n {
            st.acc += prefix * x[st.leaf];
            st.abs += prefix_abs * x[st.leaf].norm();
            st.leaf += 1;
            return;
        }
        let base = alpha[t] * self.n;
        for j in 0..self.n {
            if used & (1 << j) != 0 {
                continue;
            }
            let e = self.af[base + j];
            if e.re == 0.0 && e.im == 0.0 {
                // the whole subtree contributes exactly zero; skip it but
                // keep the lexicographic leaf counter in sync
                st.leaf += self.fact[self.n - t - 1];
                continue;
            }
            self.descend(
                alpha,
                x,
                st,
                t + 1,
                used | (1 << j),
                prefix * e,
                prefix_abs * e.norm(),
            );
        }
    }

    /// Error radius of one computed component with absolute mass `abs_row`
    /// against an input of l1 norm `l1x`: float rounding across the n!-term
    /// sum of (n+1)-factor products, plus the entry-embedding model error
    /// n·δ·max^{n−1} per term. Constants are deliberately generous.
    fn component_bound(&self, abs_row: f64, l1x: f64) -> f64 {
        let terms = self.dim() as f64 + self.n as f64 + 2.0;
        let model = self.n as f64
            * self.entry_err
            * self.max_abs.max(1e-300).powi(self.n as i32 - 1)
            * l1x;
        2.0 * (terms * EPS * abs_row + model) + 1e-300
    }

    /// Upper bound on the spectral radius of `π(A)`: its largest absolute
    /// row sum (the subordinate ∞-norm), computed by one all-ones pass plus
    /// its own error radius.
    fn abs_row_sum_bound(&self) -> f64 {
        let dim = self.dim();
        let ones = vec![Complex::new(1.0, 0.0); dim];
        let mut y = vec![Complex::new(0.0, 0.0); dim];
        let mut abs = vec![0.0f64; dim];
        self.apply(&ones, &mut y, &mut abs);
        let max_abs = abs.iter().fold(0.0f64, |m, &v| m.max(v));
        max_abs + self.component_bound(max_abs, dim as f64)
    }
}

struct PowerOutcome {
    /// Eigenvalue estimate of `π(A)` (shift already removed).
    value: f64,
    residual: f64,
    rounding: f64,
    iterations: usize,
    converged: bool,
    vector: Vec<Complex<f64>>,
}

/// Power iteration on `π(A)` (or `σI − π(A)` when `shift` is set), started
/// from a seeded random unit vector — never the all-ones vector, which is an
/// exact eigenvector (eigenvalue per A) and would stall the iteration on the
/// wrong eigenpair. The iterate is re-orthogonalized against `deflate`
/// (assumed orthonormal) every step, which redirects the iteration to the
/// next eigenspace. Convergence: residual ≤ 1e−9·max(|Rayleigh|, 1).
///
/// The certificate is asymmetric, matching what is provable: for Hermitian
/// `π(A)` the returned Rayleigh value minus `rounding` is an unconditional
/// lower bound on λ_max (no deflation, no shift), while the two-sided
/// bracket `value ± (residual + rounding)` locates *some* eigenvalue and is
/// the dominant one precisely when the iteration converged toward it.
fn power_iterate(
    kernel: &FloatKernel<'_>,
    shift: Option<f64>,
    deflate: &[Vec<Complex<f64>>],
    seed: u64,
    budget: usize,
) -> PowerOutcome {
    let dim = kernel.dim();
    let dimf = dim as f64;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut x = random_unit(&mut rng, dim);
    orthogonalize(&mut x, deflate);
    let mut y = vec![Complex::new(0.0, 0.0); dim];
    let mut abs = vec![0.0f64; dim];
    let mut outcome = PowerOutcome {
        value: 0.0,
        residual: f64::INFINITY,
        rounding: f64::INFINITY,
        iterations: 0,
        converged: false,
        vector: Vec::new(),
    };
    for it in 1..=budget {
        kernel.apply(&x, &mut y, &mut abs);
        if let Some(s) = shift {
            for i in 0..dim {
                y[i] = x[i].scale(s) - y[i];
            }
        }
        let mut r = 0.0f64;
        let mut dot_abs = 0.0f64;
        let mut l1x = 0.0f64;
        for i in 0..dim {
            r += (x[i].conj() * y[i]).re;
            dot_abs += x[i].norm() * y[i].norm();
            l1x += x[i].norm();
        }
        let residual = x
            .iter()
            .zip(&y)
            .map(|(xi, yi)| (yi - xi.scale(r)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        // componentwise image error ≤ abs_i·c1 + model; its l2 mass bounds
        // both the Rayleigh perturbation (Cauchy–Schwarz against unit x)
        // and the residual perturbation — hence the factor 2
        let model = kernel.component_bound(0.0, l1x)
            + shift.map(|s| 4.0 * EPS * s.abs()).unwrap_or(0.0);
        let c1 = 2.0 * (dimf + kernel.n as f64 + 2.0) * EPS;
        let vec_err = abs
            .iter()
            .map(|&a| {
                let e = a * c1 + model;
                e * e
            })
            .sum::<f64>()
            .sqrt();
        let rounding =
            2.0 * (vec_err + 2.0 * dimf * EPS * dot_abs + 4.0 * dimf * EPS * (r.abs() + 1.0));
        outcome.value = shift.map(|s| s - r).unwrap_or(r);
        outcome.residual = residual;
        outcome.rounding = rounding;
        outcome.iterations = it;
        if residual <= POWER_RTOL * r.abs().max(1.0) {
            outcome.converged = true;
            break;
        }
        let nrm = y.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if nrm < 1e-280 {
            // a (numerically) annihilated iterate already passed the
            // residual test above with r ≈ 0; this merely avoids a 1/0
            outcome.converged = true;
            break;
        }
        std::mem::swap(&mut x, &mut y);
        let inv = 1.0 / nrm;
        for c in x.iter_mut() {
            *c = c.scale(inv);
        }
        orthogonalize(&mut x, deflate);
    }
    outcome.vector = x;
    outcome
}

fn orthogonalize(x: &mut [Complex<f64>], against: &[Vec<Complex<f64>>]) {
    for d in against {
        let proj = d
            .iter()
            .zip(x.iter())
            .fold(Complex::new(0.0, 0.0), |acc, (di, xi)| acc + di.conj() * xi);
        for (xi, di) in x.iter_mut().zip(d.iter()) {
            *xi -= di * proj;
        }
    }
    if !against.is_empty() {
        let nrm = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 1e-280 {
            let inv = 1.0 / nrm;
            for c in x.iter_mut() {
                *c = c.scale(inv);
            }
        }
    }
}
