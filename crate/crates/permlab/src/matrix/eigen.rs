//! Certified floating-point spectra of Hermitian matrices.
//!
//! Eigenvalues come from a dense Hermitian solver; the certificate is
//! a-posteriori. With computed pairs `(V, L)` for the embedded matrix `F`,
//! let `W = |F - V L V*|_F` and `G = |V* V - I|_F`. The polar factor `U` of
//! `V` is unitary with `|V - U| <= G`, so `U L U*` is Hermitian with exact
//! spectrum `L` and `|F - U L U*| <= W + G (2 + G) max|L|`. Weyl's
//! inequality then bounds every sorted eigenvalue of `F`, and the entrywise
//! embedding radii bound the distance from `F` to the true matrix.

use nalgebra::{Complex, DMatrix};

use super::SquareMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, SignDecision};

/// A real quantity known to lie within `err` of `value`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedReal {
    pub value: f64,
    pub err: f64,
}

impl CertifiedReal {
    pub fn new(value: f64, err: f64) -> Self {
        Self { value, err }
    }

    pub fn exact(value: f64) -> Self {
        Self { value, err: 0.0 }
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.err
    }

    pub fn lower(&self) -> f64 {
        self.value - self.err
    }

    pub fn upper(&self) -> f64 {
        self.value + self.err
    }
}

impl std::fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ± {:.3e}", self.value, self.err)
    }
}

/// Sorted eigenvalues with a uniform error bound: the i-th true eigenvalue
/// (ascending, with multiplicity) lies within `bound` of `values[i]`.
#[derive(Clone, Debug)]
pub struct CertifiedSpectrum {
    pub values: Vec<f64>,
    pub bound: f64,
}

impl CertifiedSpectrum {
    pub fn lambda_min(&self) -> f64 {
        *self.values.first().expect("nonempty spectrum")
    }

    pub fn lambda_max(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    fn scale(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `Positive` / `Zero` / `Negative` as in [`super::factor::psd_status`],
    /// with tolerance `max(bound, 1e-10 * max|lambda|)`.
    pub fn psd_classification(&self) -> SignDecision {
        let thr = self.bound.max(1e-10 * self.scale());
        let min = self.lambda_min();
        if min < -thr {
            SignDecision::Negative
        } else if min > thr {
            SignDecision::Positive
        } else {
            SignDecision::Zero
        }
    }

    /// Number of eigenvalues above the relative threshold `1e-8 * max|lambda|`
    /// in absolute value (the numerical rank of a Hermitian matrix).
    pub fn rank_by_threshold(&self) -> usize {
        let thr = 1e-8 * self.scale();
        self.values.iter().filter(|v| v.abs() > thr).count()
    }
}

/// Embed into machine complex numbers; returns the matrix and the largest
/// per-entry distance to the true matrix (embedding radius plus conversion
/// rounding).
pub fn to_complex64<T: Scalar>(
    a: &SquareMatrix<T>,
    prec: usize,
) -> (DMatrix<Complex<f64>>, f64) {
    let n = a.size();
    let mut err = 0.0f64;
    let m = DMatrix::from_fn(n, n, |i, j| {
        let e = a.at(i, j).embed(prec);
        let (re, im) = (e.re_f64(), e.im_f64());
        err = err.max(e.error() + (re.abs() + im.abs()) * 2f64.powi(-50));
        Complex::new(re, im)
    });
    (m, err)
}

/// Certified sorted spectrum of a machine-precision Hermitian matrix whose
/// entries are within `entry_err` of the true matrix. Workhorse behind
/// [`hermitian_eigenpairs`], also usable on matrices assembled directly in
/// `f64` arithmetic.
pub fn certified_sym_eigen(
    f: &DMatrix<Complex<f64>>,
    entry_err: f64,
) -> Result<(CertifiedSpectrum, DMatrix<Complex<f64>>)> {
    let n = f.nrows();
    if n == 0 || f.ncols() != n {
        return Err(Error::Invalid("empty or non-square matrix".to_string()));
    }
    // the solver requires an exactly Hermitian input; fold in the tiny
    // asymmetry (bounded by entry_err per entry) by averaging
    let sym = (f + f.adjoint()).scale(0.5);
    let se = sym.clone().symmetric_eigen();
    let lam = &se.eigenvalues;
    let v = &se.eigenvectors;
    let diag = DMatrix::from_diagonal(&lam.map(|x| Complex::new(x, 0.0)));
    let w = (&sym - v * diag * v.adjoint()).norm();
    let g = (v.adjoint() * v - DMatrix::<Complex<f64>>::identity(n, n)).norm();
    let lmax = lam.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if g >= 0.5 {
        return Err(Error::NonConvergence(
            "eigenvector matrix far from unitary".to_string(),
        ));
    }
    // |sym - f| <= entry_err (averaging moves each entry by at most the
    // asymmetry/2, itself bounded by entry_err); |f - A| <= n * entry_err
    let bound = w + g * (2.0 + g) * lmax + (n as f64 + 1.0) * entry_err;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| lam[i].total_cmp(&lam[j]));
    let values: Vec<f64> = order.iter().map(|&i| lam[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((
        CertifiedSpectrum {
            values,
            bound: bound * (1.0 + 1e-9) + 1e-300,
        },
        vectors,
    ))
}

/// Certified sorted spectrum of a Hermitian matrix together with the
/// computed eigenvectors, columns aligned with the ascending values. The
/// certificate covers the values; the vectors are the solver's output,
/// orthonormal up to the `G` defect folded into the bound.
pub fn hermitian_eigenpairs<T: Scalar>(
    a: &SquareMatrix<T>,
    prec: usize,
) -> Result<(CertifiedSpectrum, DMatrix<Complex<f64>>)> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let (f, entry_err) = to_complex64(a, prec);
    certified_sym_eigen(&f, entry_err)
}

/// Certified sorted spectrum of a Hermitian matrix.
pub fn eigenvalues_hermitian<T: Scalar>(
    a: &SquareMatrix<T>,
    prec: usize,
) -> Result<CertifiedSpectrum> {
    hermitian_eigenpairs(a, prec).map(|(s, _)| s)
}

/// Numerical rank of a Hermitian matrix via its certified spectrum.
pub fn rank_float<T: Scalar>(a: &SquareMatrix<T>, prec: usize) -> Result<usize> {
    Ok(eigenvalues_hermitian(a, prec)?.rank_by_threshold())
}
