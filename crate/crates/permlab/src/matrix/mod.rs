//! Dense square matrices over any [`Scalar`], plus the structured views
//! (correlation, doubly stochastic, block-partitioned) that the conjecture
//! checkers consume.

pub mod eigen;
pub mod factor;
pub mod io;

use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::{exact_sqrt, ApproxComplex, Scalar, SignDecision};

/// Row-major dense square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T: Scalar> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn new(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                data.len()
            )));
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        Ok(SquareMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "ragged integer rows");
        SquareMatrix::from_fn(n, |i, j| T::from_int(rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        SquareMatrix::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// The all-ones matrix J_n.
    pub fn all_ones(n: usize) -> Self {
        SquareMatrix::from_fn(n, |_, _| T::one())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Scalar>(&self, f: impl Fn(&T) -> Result<U>) -> Result<SquareMatrix<U>> {
        Ok(SquareMatrix {
            n: self.n,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn transpose(&self) -> Self {
        SquareMatrix::from_fn(self.n, |i, j| self.at(j, i).clone())
    }

    pub fn conj_transpose(&self) -> Self {
        SquareMatrix::from_fn(self.n, |i, j| self.at(j, i).conj())
    }

    pub fn conj_entries(&self) -> Self {
        self.map(|a| a.conj())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a.add(b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a.sub(b))
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.n, self.n, rhs.n, rhs.n
            )));
        }
        Ok(SquareMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.mul(c))
    }

    /// Matrix product.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.n, self.n, rhs.n, rhs.n
            )));
        }
        Ok(SquareMatrix::from_fn(self.n, |i, j| {
            T::sum((0..self.n).map(|k| self.at(i, k).mul(rhs.at(k, j))))
        }))
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| a.mul(b))
    }

    /// Entrywise k-th power; `k = 0` gives the all-ones matrix.
    pub fn hadamard_power(&self, k: u32) -> Self {
        self.map(|a| a.pow_int(k))
    }

    /// Kronecker (tensor) product, size `n*m`.
    pub fn kronecker(&self, rhs: &Self) -> Self {
        let (n, m) = (self.n, rhs.n);
        SquareMatrix::from_fn(n * m, |i, j| {
            self.at(i / m, j / m).mul(rhs.at(i % m, j % m))
        })
    }

    /// Entrywise `|a_ij|^2`, exact in exact fields.
    pub fn entrywise_abs_squared(&self) -> Self {
        self.map(|a| a.abs_squared())
    }

    /// Entrywise `|a_ij|` when every modulus is rational; `None` otherwise.
    pub fn entrywise_abs_exact(&self) -> Option<Self> {
        let data = self
            .data
            .iter()
            .map(|a| {
                let m2 = a.abs_squared().to_rational()?;
                Some(T::from_rational(&exact_sqrt(&m2)?))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(SquareMatrix { n: self.n, data })
    }

    /// Entrywise `|a_ij|` as certified floats.
    pub fn entrywise_abs_float(&self, prec: usize) -> SquareMatrix<ApproxComplex> {
        self.map(|a| {
            let e = a.embed(prec);
            e.conj_ac()
                .mul_ac(&e)
                .sqrt_real_nonneg()
                .expect("|a|^2 is certifiably nonnegative")
        })
    }

    pub fn trace(&self) -> T {
        T::sum((0..self.n).map(|i| self.at(i, i).clone()))
    }

    pub fn sum_entries(&self) -> T {
        T::sum(self.data.iter().cloned())
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.n)
            .map(|i| T::sum(self.row(i).iter().cloned()))
            .collect()
    }

    pub fn col_sums(&self) -> Vec<T> {
        (0..self.n)
            .map(|j| T::sum((0..self.n).map(|i| self.at(i, j).clone())))
            .collect()
    }

    /// Delete one row and one column.
    pub fn minor(&self, row: usize, col: usize) -> Self {
        self.submatrix_delete(&[row], &[col])
    }

    /// Delete the listed rows and columns (indices need not be sorted).
    pub fn submatrix_delete(&self, rows: &[usize], cols: &[usize]) -> Self {
        let keep = |dropped: &[usize]| -> Vec<usize> {
            (0..self.n).filter(|i| !dropped.contains(i)).collect()
        };
        let (ri, ci) = (keep(rows), keep(cols));
        assert_eq!(ri.len(), ci.len(), "minor must stay square");
        SquareMatrix::from_fn(ri.len(), |i, j| self.at(ri[i], ci[j]).clone())
    }

    /// Restrict to the listed rows and columns.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        SquareMatrix::from_fn(indices.len(), |i, j| {
            self.at(indices[i], indices[j]).clone()
        })
    }

    /// Rows permuted: `result[i] = self[sigma[i]]`.
    pub fn permute_rows(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.n);
        SquareMatrix::from_fn(self.n, |i, j| self.at(sigma[i], j).clone())
    }

    pub fn permute_cols(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.n);
        SquareMatrix::from_fn(self.n, |i, j| self.at(i, sigma[j]).clone())
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.n).all(|i| {
            (i..self.n).all(|j| self.at(i, j).sub(&self.at(j, i).conj()).could_be_zero())
        })
    }

    /// Certified-float image of the matrix.
    pub fn embed(&self, prec: usize) -> SquareMatrix<ApproxComplex> {
        self.map(|a| a.embed(prec))
    }

    /// Largest entry error radius (zero for exact fields).
    pub fn max_error_radius(&self) -> f64 {
        self.data
            .iter()
            .map(|a| a.error_radius())
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus, as an upper bound in f64.
    pub fn max_entry_modulus(&self) -> f64 {
        self.data
            .iter()
            .map(|a| a.embed(64).modulus_upper())
            .fold(0.0, f64::max)
    }
}

impl<T: Scalar> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        self.at(i, j)
    }
}

/// Gram matrix `G^H G` where `G` stacks the given rows: entries
/// `a_ij = sum_r conj(r_i) * r_j`, Hermitian positive semidefinite of rank
/// at most the number of rows.
pub fn gram_from_rows<T: Scalar>(rows: &[Vec<T>]) -> Result<SquareMatrix<T>> {
    let n = rows.first().map_or(0, Vec::len);
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(
            "gram construction needs equal-length nonempty rows".to_string(),
        ));
    }
    Ok(SquareMatrix::from_fn(n, |i, j| {
        T::sum(rows.iter().map(|r| r[i].conj().mul(&r[j])))
    }))
}

// ---------------------------------------------------------------------------
// structured views

/// Hermitian positive semidefinite with unit diagonal.
#[derive(Clone, Debug)]
pub struct CorrelationMatrix<T: Scalar>(SquareMatrix<T>);

impl<T: Scalar> CorrelationMatrix<T> {
    pub fn new(m: SquareMatrix<T>) -> Result<Self> {
        if !m.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        for i in 0..m.size() {
            if !m.at(i, i).sub(&T::one()).could_be_zero() {
                return Err(Error::NotPsd(format!(
                    "diagonal entry {i} is {} instead of 1",
                    m.at(i, i)
                )));
            }
        }
        match factor::psd_status(&m)? {
            SignDecision::Negative => Err(Error::NotPsd("a pivot is negative".to_string())),
            _ => Ok(CorrelationMatrix(m)),
        }
    }

    /// For matrices positive semidefinite by construction.
    pub fn new_unchecked(m: SquareMatrix<T>) -> Self {
        debug_assert!(m.is_hermitian());
        CorrelationMatrix(m)
    }

    pub fn as_matrix(&self) -> &SquareMatrix<T> {
        &self.0
    }

    pub fn into_inner(self) -> SquareMatrix<T> {
        self.0
    }
}

/// `D^(-1/2) A D^(-1/2)` for Hermitian PSD `A` with strictly positive
/// diagonal, staying in the exact field; fails when some `sqrt(d_i * d_j)`
/// is irrational.
pub fn normalize_to_correlation<T: Scalar>(a: &SquareMatrix<T>) -> Result<SquareMatrix<T>> {
    let n = a.size();
    let diag: Vec<_> = (0..n)
        .map(|i| {
            a.at(i, i).to_rational().ok_or_else(|| Error::NotRepresentable {
                target: "exact correlation normalization",
                detail: format!("diagonal entry {i} is not rational"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let prod = &diag[i] * &diag[j];
            let s = exact_sqrt(&prod).ok_or_else(|| Error::NotRepresentable {
                target: "exact correlation normalization",
                detail: format!("sqrt(d_{i} * d_{j}) = sqrt({prod}) is irrational"),
            })?;
            out.push(a.at(i, j).div(&T::from_rational(&s))?);
        }
    }
    SquareMatrix::new(n, out)
}

/// Float-path normalization of a Hermitian matrix with positive diagonal.
pub fn normalize_to_correlation_float<T: Scalar>(
    a: &SquareMatrix<T>,
    prec: usize,
) -> Result<SquareMatrix<ApproxComplex>> {
    let e = a.embed(prec);
    let n = e.size();
    let mut roots = Vec::with_capacity(n);
    for i in 0..n {
        roots.push(e.at(i, i).sqrt_real_nonneg()?);
    }
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(e.at(i, j).div_ac(&roots[i].mul_ac(&roots[j]))?);
        }
    }
    SquareMatrix::new(n, out)
}

/// Correlation matrix with constant off-diagonal value `r` (PSD exactly when
/// `-1/(n-1) <= r <= 1`).
pub fn constant_correlation<T: Scalar>(
    n: usize,
    r: &T,
) -> Result<CorrelationMatrix<T>> {
    let m = SquareMatrix::from_fn(n, |i, j| if i == j { T::one() } else { r.clone() });
    CorrelationMatrix::new(m)
}

/// Entrywise nonnegative real with all row and column sums equal to one.
#[derive(Clone, Debug)]
pub struct DoublyStochasticMatrix<T: Scalar>(SquareMatrix<T>);

impl<T: Scalar> DoublyStochasticMatrix<T> {
    pub fn new(m: SquareMatrix<T>) -> Result<Self> {
        for i in 0..m.size() {
            for j in 0..m.size() {
                let a = m.at(i, j);
                if !a.is_real() {
                    return Err(Error::NotDoublyStochastic(format!(
                        "entry ({i},{j}) = {a} is not real"
                    )));
                }
                if a.sign_real() == SignDecision::Negative {
                    return Err(Error::NotDoublyStochastic(format!(
                        "entry ({i},{j}) = {a} is negative"
                    )));
                }
            }
        }
        let one = T::one();
        for (axis, sums) in [("row", m.row_sums()), ("column", m.col_sums())] {
            for (i, s) in sums.iter().enumerate() {
                let d = s.sub(&one);
                // certified floats get a small absolute tolerance on the sums
                let ok = if T::EXACT {
                    d.is_zero()
                } else {
                    let e = d.embed(64);
                    e.re_f64().hypot(e.im_f64()) <= 1e-9 + e.error_radius()
                };
                if !ok {
                    return Err(Error::NotDoublyStochastic(format!(
                        "{axis} {i} sums to {s}"
                    )));
                }
            }
        }
        Ok(DoublyStochasticMatrix(m))
    }

    pub fn new_unchecked(m: SquareMatrix<T>) -> Self {
        DoublyStochasticMatrix(m)
    }

    pub fn as_matrix(&self) -> &SquareMatrix<T> {
        &self.0
    }
}

/// Block partition of a square matrix into `k x k` blocks with the given
/// diagonal sizes.
#[derive(Clone, Debug)]
pub struct PartitionedView<'a, T: Scalar> {
    m: &'a SquareMatrix<T>,
    bounds: Vec<usize>, // prefix sums, length k + 1
}

impl<'a, T: Scalar> PartitionedView<'a, T> {
    pub fn new(m: &'a SquareMatrix<T>, sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() || sizes.iter().any(|&s| s == 0) {
            return Err(Error::DimensionMismatch(
                "block sizes must be nonempty and positive".to_string(),
            ));
        }
        let mut bounds = vec![0];
        for &s in sizes {
            bounds.push(bounds.last().unwrap() + s);
        }
        if *bounds.last().unwrap() != m.size() {
            return Err(Error::DimensionMismatch(format!(
                "block sizes sum to {} but the matrix has order {}",
                bounds.last().unwrap(),
                m.size()
            )));
        }
        Ok(PartitionedView { m, bounds })
    }

    pub fn block_count(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn block_size(&self, i: usize) -> usize {
        self.bounds[i + 1] - self.bounds[i]
    }

    pub fn diagonal_block(&self, i: usize) -> SquareMatrix<T> {
        self.block(i, i).expect("diagonal blocks are square")
    }

    /// Copy out block (i, j); errors unless the block is square.
    pub fn block(&self, i: usize, j: usize) -> Result<SquareMatrix<T>> {
        let (r0, r1) = (self.bounds[i], self.bounds[i + 1]);
        let (c0, c1) = (self.bounds[j], self.bounds[j + 1]);
        if r1 - r0 != c1 - c0 {
            return Err(Error::DimensionMismatch(format!(
                "block ({i},{j}) is {}x{}",
                r1 - r0,
                c1 - c0
            )));
        }
        Ok(SquareMatrix::from_fn(r1 - r0, |r, c| {
            self.m.at(r0 + r, c0 + c).clone()
        }))
    }
}
