//! The scalar tower: exact rationals, Gaussian rationals, cyclotomic numbers,
//! and certified high-precision complex floats. Every matrix algorithm in this
//! crate is generic over [`Scalar`].

pub mod approx;
pub mod cyclotomic;
pub mod gaussian;

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
pub use approx::{ApproxComplex, DEFAULT_PRECISION};
pub use cyclotomic::{cyclo_make, zeta, CyclotomicNumber};
pub use gaussian::GaussianRational;

/// Exact rational numbers, always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Three-valued sign of a real quantity, with an extra state for certified
/// floats whose interval straddles zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignDecision {
    Negative,
    Zero,
    Positive,
    /// Only certified floats return this; exact fields never do.
    Inconclusive,
}

impl SignDecision {
    pub fn is_nonnegative(self) -> bool {
        matches!(self, SignDecision::Zero | SignDecision::Positive)
    }
}

/// Common interface of all scalar fields.
///
/// Values are immutable; every operation allocates its result. All four
/// implementations are `Send + Sync`, so matrices over them can be shared
/// freely across threads.
pub trait Scalar: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    /// True for the exact fields, false for certified floats.
    const EXACT: bool;
    /// Short name used in error messages.
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(k: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Exact conversion from a cyclotomic value, when one exists in this field.
    fn from_cyclotomic(c: &CyclotomicNumber) -> Result<Self>;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// Exact division by two (all supported fields have it; floats halve the
    /// binary exponent, which is also exact).
    fn halve(&self) -> Self;

    fn is_zero(&self) -> bool;
    /// True when the value could be zero: exact zero in exact fields, an
    /// interval containing zero for certified floats.
    fn could_be_zero(&self) -> bool {
        self.is_zero()
    }
    /// Complex-float image with a certified error radius.
    fn embed(&self, prec: usize) -> ApproxComplex;
    /// `Some` exactly when the value is a rational number.
    fn to_rational(&self) -> Option<Rational>;
    /// Sign of a real value. Exact fields decide exactly (refining the
    /// embedding precision where needed) and never return `Inconclusive`.
    /// Calling this on a value that is not real is a caller bug.
    fn sign_real(&self) -> SignDecision;
    /// Parse the text syntax of this field. `prec` only matters for floats.
    fn parse(text: &str, prec: usize) -> Result<Self>;

    /// Conductor of the smallest cyclotomic field containing the value:
    /// 1 for rationals, 4 for properly complex Gaussian rationals. Floats
    /// report 1; the notion does not apply to them.
    fn conductor(&self) -> u32 {
        1
    }

    fn abs_squared(&self) -> Self {
        self.conj().mul(self)
    }

    fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Error radius of the value; zero in exact fields.
    fn error_radius(&self) -> f64 {
        0.0
    }

    fn pow_int(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn sum(values: impl Iterator<Item = Self>) -> Self {
        values.fold(Self::zero(), |acc, v| acc.add(&v))
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// Parse `p`, `p/q`, or `-p/q` with arbitrary-precision parts.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = |msg: &str| Error::ScalarLiteral {
        text: text.to_string(),
        msg: msg.to_string(),
    };
    let mut parts = text.splitn(2, '/');
    let num_text = parts.next().ok_or_else(|| bad("empty"))?;
    let num = BigInt::from_str(num_text.trim()).map_err(|_| bad("bad numerator"))?;
    match parts.next() {
        None => Ok(Rational::from_integer(num)),
        Some(den_text) => {
            let den = BigInt::from_str(den_text.trim()).map_err(|_| bad("bad denominator"))?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Exact square root of a nonnegative rational, when it is itself rational.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(Rational::new(num, den))
    } else {
        None
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const NAME: &'static str = "rational";

    fn zero() -> Self {
        Rational::from_integer(BigInt::zero())
    }

    fn one() -> Self {
        Rational::from_integer(BigInt::one())
    }

    fn from_int(k: i64) -> Self {
        rat_int(k)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_cyclotomic(c: &CyclotomicNumber) -> Result<Self> {
        c.to_rational().ok_or_else(|| Error::NotRepresentable {
            target: Self::NAME,
            detail: format!("{c} is not rational"),
        })
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        if Zero::is_zero(rhs) {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn halve(&self) -> Self {
        self / Rational::from_integer(BigInt::from(2))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn embed(&self, prec: usize) -> ApproxComplex {
        ApproxComplex::from_rational(self, prec)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn sign_real(&self) -> SignDecision {
        if Zero::is_zero(self) {
            SignDecision::Zero
        } else if self.is_positive() {
            SignDecision::Positive
        } else {
            SignDecision::Negative
        }
    }

    fn parse(text: &str, _prec: usize) -> Result<Self> {
        parse_rational(text)
    }
}
