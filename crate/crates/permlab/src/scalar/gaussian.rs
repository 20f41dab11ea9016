//! Exact complex rationals `a + b*i`.

use std::fmt;

use num_traits::Signed;

use super::approx::ApproxComplex;
use super::{parse_rational, CyclotomicNumber, Rational, Scalar, SignDecision};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational {
            re: Rational::from_integer(re.into()),
            im: Rational::from_integer(im.into()),
        }
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    /// `|z|^2`, a rational.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

/// Split `"re"`, `"re+im*i"`, `"re-im*i"`, or `"im*i"` into component texts.
/// The split point is the last sign that is neither leading nor part of an
/// exponent, so float literals like `2e-3` survive.
pub(crate) fn split_complex_literal(text: &str) -> Result<(&str, Option<&str>)> {
    let text = text.trim();
    let bad = |msg: &str| Error::ScalarLiteral {
        text: text.to_string(),
        msg: msg.to_string(),
    };
    if text.is_empty() {
        return Err(bad("empty literal"));
    }
    let Some(body) = text.strip_suffix("*i") else {
        return Ok((text, None));
    };
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        let c = bytes[k];
        if (c == b'+' || c == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    match split {
        Some(k) => {
            let re = &body[..k];
            let im = match &body[k..k + 1] {
                "+" => &body[k + 1..],
                _ => &body[k..],
            };
            if im.is_empty() {
                return Err(bad("missing imaginary component"));
            }
            Ok((re, Some(im)))
        }
        None => Ok(("0", Some(body))),
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;
    const NAME: &'static str = "gaussian";

    fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    fn one() -> Self {
        Self::from_ints(1, 0)
    }

    fn from_int(k: i64) -> Self {
        Self::from_ints(k, 0)
    }

    fn from_rational(r: &Rational) -> Self {
        GaussianRational {
            re: r.clone(),
            im: Rational::zero(),
        }
    }

    fn from_cyclotomic(c: &CyclotomicNumber) -> Result<Self> {
        c.to_gaussian().ok_or_else(|| Error::NotRepresentable {
            target: Self::NAME,
            detail: format!("{c} is not in Q(i)"),
        })
    }

    fn add(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        let n = rhs.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.mul(&rhs.conj());
        Ok(GaussianRational {
            re: p.re / &n,
            im: p.im / &n,
        })
    }

    fn neg(&self) -> Self {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn halve(&self) -> Self {
        let two = Rational::from_integer(2.into());
        GaussianRational {
            re: &self.re / &two,
            im: &self.im / &two,
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn embed(&self, prec: usize) -> ApproxComplex {
        let re = ApproxComplex::from_rational(&self.re, prec);
        let im = ApproxComplex::from_rational(&self.im, prec);
        ApproxComplex::from_parts(
            re.re_bigfloat().clone(),
            im.re_bigfloat().clone(),
            re.error() + im.error(),
            prec,
        )
    }

    fn to_rational(&self) -> Option<Rational> {
        self.im.is_zero().then(|| self.re.clone())
    }

    fn sign_real(&self) -> SignDecision {
        if !self.im.is_zero() {
            return SignDecision::Inconclusive;
        }
        if self.re.is_zero() {
            SignDecision::Zero
        } else if self.re.is_positive() {
            SignDecision::Positive
        } else {
            SignDecision::Negative
        }
    }

    fn parse(text: &str, _prec: usize) -> Result<Self> {
        let (re_text, im_text) = split_complex_literal(text)?;
        let re = parse_rational(re_text)?;
        let im = match im_text {
            Some(t) => parse_rational(t)?,
            None => Rational::zero(),
        };
        Ok(GaussianRational { re, im })
    }

    fn conductor(&self) -> u32 {
        if self.im.is_zero() {
            1
        } else {
            4
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}*i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn field_arithmetic() {
        let z = GaussianRational::from_ints(3, 4);
        let w = GaussianRational::from_ints(1, -2);
        let p = z.mul(&w);
        assert_eq!(p, GaussianRational::from_ints(11, -2));
        assert_eq!(p.div(&w).unwrap(), z);
        assert_eq!(z.mul(&z.conj()).re, rat_int(25));
        assert!(z.mul(&z.conj()).im.is_zero());
        assert!(GaussianRational::one()
            .div(&GaussianRational::zero())
            .is_err());
    }

    #[test]
    fn literals_round_trip() {
        let z = GaussianRational::parse("2-4*i", 0).unwrap();
        assert_eq!(z, GaussianRational::from_ints(2, -4));
        let w = GaussianRational::parse("-3/2*i", 0).unwrap();
        assert_eq!(w, GaussianRational::new(rat_int(0), rat(-3, 2)));
        let r = GaussianRational::parse("7/3", 0).unwrap();
        assert_eq!(r.to_rational(), Some(rat(7, 3)));
        for z in [
            GaussianRational::from_ints(0, 0),
            GaussianRational::from_ints(-5, 0),
            GaussianRational::new(rat(1, 2), rat(-8, 3)),
            GaussianRational::from_ints(0, 7),
        ] {
            let text = z.to_string();
            assert_eq!(GaussianRational::parse(&text, 0).unwrap(), z, "{text}");
        }
    }

    #[test]
    fn embedding_matches_components() {
        let z = GaussianRational::new(rat(6185, 128), rat(-1, 2));
        let e = z.embed(96);
        assert_eq!(e.re_f64(), 48.3203125);
        assert_eq!(e.im_f64(), -0.5);
        assert!(e.error() < 1e-24);
    }

    #[test]
    fn signs() {
        assert_eq!(
            GaussianRational::from_ints(-2, 0).sign_real(),
            SignDecision::Negative
        );
        assert_eq!(GaussianRational::zero().sign_real(), SignDecision::Zero);
        assert_eq!(
            GaussianRational::i().sign_real(),
            SignDecision::Inconclusive
        );
    }
}
