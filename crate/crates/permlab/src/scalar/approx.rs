//! Certified complex floats: arbitrary-precision components plus a forward
//! error radius. The radius is a plain `f64` upper bound on the absolute
//! (complex-modulus) distance between the stored value and the value it
//! represents; it is propagated through every operation with deliberately
//! generous constants, since the margins it has to certify are many orders of
//! magnitude wider than the working precision.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};

use super::{CyclotomicNumber, Rational, Scalar, SignDecision};
use crate::error::{Error, Result};

/// Default working precision in bits, CLI-configurable.
pub const DEFAULT_PRECISION: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

pub(crate) fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Best-effort `f64` image of a BigFloat (round toward zero, top word only).
/// Only used for error estimation (always behind an upward bump) and display.
pub(crate) fn bf_to_f64(b: &BigFloat) -> f64 {
    if b.is_zero() {
        return 0.0;
    }
    match b.as_raw_parts() {
        Some((words, _, sign, exp, _)) => {
            let top = *words.last().unwrap_or(&0) as f64;
            let mag = top * 2f64.powi(exp - 64);
            match sign {
                Sign::Neg => -mag,
                Sign::Pos => mag,
            }
        }
        None => f64::NAN,
    }
}

fn bf_from_biguint(m: &BigUint) -> BigFloat {
    let digits: Vec<u64> = m.iter_u64_digits().collect();
    if digits.is_empty() {
        return BigFloat::from_u64(0, 64);
    }
    let p = 64 * digits.len() + 64;
    let shift = BigFloat::from_f64(18446744073709551616.0, p); // 2^64, exact
    let mut acc = BigFloat::from_u64(0, p);
    for d in digits.iter().rev() {
        acc = acc.mul(&shift, p, RM).add(&BigFloat::from_u64(*d, p), p, RM);
    }
    acc
}

pub(crate) fn bf_from_bigint(x: &BigInt) -> BigFloat {
    let mut b = bf_from_biguint(x.magnitude());
    if x.sign() == num_bigint::Sign::Minus {
        b.inv_sign();
    }
    b
}

/// Upward-bumped absolute value; any quantity fed into a radius goes
/// through this.
fn up(x: f64) -> f64 {
    x.abs() * (1.0 + 1e-9) + 1e-315
}

fn pow2(e: i32) -> f64 {
    2f64.powi(e.max(-1000))
}

/// Bound on the rounding committed by a handful of operations at `prec` bits
/// whose intermediate magnitudes are at most `mag`.
fn rounding(mag: f64, prec: usize) -> f64 {
    up(mag) * pow2(8 - prec.min(900) as i32)
}

/// A complex value known to within `err` of its true value.
#[derive(Clone, Debug)]
pub struct ApproxComplex {
    re: BigFloat,
    im: BigFloat,
    err: f64,
    prec: usize,
}

impl ApproxComplex {
    pub fn from_parts(re: BigFloat, im: BigFloat, err: f64, prec: usize) -> Self {
        ApproxComplex { re, im, err, prec }
    }

    pub fn from_f64s(re: f64, im: f64, prec: usize) -> Self {
        ApproxComplex {
            re: BigFloat::from_f64(re, prec),
            im: BigFloat::from_f64(im, prec),
            err: 0.0,
            prec,
        }
    }

    pub fn real_from_f64(x: f64, prec: usize) -> Self {
        Self::from_f64s(x, 0.0, prec)
    }

    pub fn from_rational(r: &Rational, prec: usize) -> Self {
        let num = bf_from_bigint(r.numer());
        let den = bf_from_bigint(r.denom());
        let q = num.div(&den, prec, RM);
        let err = rounding(bf_to_f64(&q), prec);
        ApproxComplex {
            re: q,
            im: BigFloat::from_u64(0, 64),
            err,
            prec,
        }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn error(&self) -> f64 {
        self.err
    }

    pub fn widen_error(&self, extra: f64) -> Self {
        let mut out = self.clone();
        out.err = up(out.err + extra.abs());
        out
    }

    pub fn re_f64(&self) -> f64 {
        bf_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        bf_to_f64(&self.im)
    }

    pub fn re_bigfloat(&self) -> &BigFloat {
        &self.re
    }

    /// Upper bound on the modulus of the represented value.
    pub fn modulus_upper(&self) -> f64 {
        up(self.re_f64().hypot(self.im_f64())) + self.err
    }

    fn modulus_lower(&self) -> f64 {
        let m = self.re_f64().hypot(self.im_f64()) * (1.0 - 1e-9) - self.err;
        m.max(0.0)
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero() && self.err == 0.0
    }

    fn op_prec(&self, rhs: &Self) -> usize {
        self.prec.max(rhs.prec)
    }

    pub fn add_ac(&self, rhs: &Self) -> Self {
        let p = self.op_prec(rhs);
        let re = self.re.add(&rhs.re, p, RM);
        let im = self.im.add(&rhs.im, p, RM);
        let err = self.err + rhs.err + rounding(bf_to_f64(&re).abs() + bf_to_f64(&im).abs(), p);
        ApproxComplex { re, im, err: up(err), prec: p }
    }

    pub fn sub_ac(&self, rhs: &Self) -> Self {
        self.add_ac(&rhs.neg_ac())
    }

    pub fn neg_ac(&self) -> Self {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        re.inv_sign();
        im.inv_sign();
        ApproxComplex { re, im, err: self.err, prec: self.prec }
    }

    pub fn conj_ac(&self) -> Self {
        let mut im = self.im.clone();
        im.inv_sign();
        ApproxComplex { re: self.re.clone(), im, err: self.err, prec: self.prec }
    }

    pub fn mul_ac(&self, rhs: &Self) -> Self {
        let p = self.op_prec(rhs);
        let re = self
            .re
            .mul(&rhs.re, p, RM)
            .sub(&self.im.mul(&rhs.im, p, RM), p, RM);
        let im = self
            .re
            .mul(&rhs.im, p, RM)
            .add(&self.im.mul(&rhs.re, p, RM), p, RM);
        let m1 = self.modulus_upper();
        let m2 = rhs.modulus_upper();
        let err = self.err * m2 + rhs.err * m1 + self.err * rhs.err + rounding(m1 * m2, p);
        ApproxComplex { re, im, err: up(err), prec: p }
    }

    pub fn div_ac(&self, rhs: &Self) -> Result<Self> {
        let p = self.op_prec(rhs);
        let m2_low = rhs.modulus_lower();
        if m2_low <= 0.0 {
            return Err(Error::DivisionByUncertainZero { radius: rhs.err });
        }
        let den = rhs
            .re
            .mul(&rhs.re, p, RM)
            .add(&rhs.im.mul(&rhs.im, p, RM), p, RM);
        let num = self.mul_ac(&rhs.conj_ac());
        let re = num.re.div(&den, p, RM);
        let im = num.im.div(&den, p, RM);
        let q_up = self.modulus_upper() / m2_low;
        let err = (self.err + q_up * rhs.err) / m2_low + rounding(q_up, p) * 4.0;
        Ok(ApproxComplex { re, im, err: up(err), prec: p })
    }

    pub fn halve_ac(&self) -> Self {
        let two = BigFloat::from_u64(2, self.prec);
        ApproxComplex {
            re: self.re.div(&two, self.prec, RM),
            im: self.im.div(&two, self.prec, RM),
            err: self.err / 2.0,
            prec: self.prec,
        }
    }

    /// Square root of a certified nonnegative real value.
    pub fn sqrt_real_nonneg(&self) -> Result<Self> {
        let radius = self.err + up(self.im_f64());
        let x = self.re_f64();
        if x < -radius {
            return Err(Error::Invalid(format!(
                "sqrt of a certifiably negative value ({x:e} with radius {radius:e})"
            )));
        }
        let p = self.prec;
        let value = if self.re.sign() == Some(Sign::Neg) {
            BigFloat::from_u64(0, p)
        } else {
            self.re.sqrt(p, RM)
        };
        let err = if x - radius > 0.0 {
            radius / (2.0 * (x - radius).sqrt()) + rounding(x.sqrt(), p)
        } else {
            up((x.max(0.0) + radius).sqrt())
        };
        Ok(ApproxComplex {
            re: value,
            im: BigFloat::from_u64(0, p),
            err: up(err),
            prec: p,
        })
    }

    /// Decide the sign of a real quantity; the imaginary component is folded
    /// into the radius.
    pub fn sign_real_certified(&self) -> SignDecision {
        let radius = self.err + up(self.im_f64());
        let x = self.re_f64();
        if radius == 0.0 && x == 0.0 {
            SignDecision::Zero
        } else if x > radius {
            SignDecision::Positive
        } else if x < -radius {
            SignDecision::Negative
        } else {
            SignDecision::Inconclusive
        }
    }

    /// True when the two certified values could be the same number.
    pub fn consistent_with(&self, other: &Self) -> bool {
        let d = self.sub_ac(other);
        d.re_f64().hypot(d.im_f64()) <= d.err
    }
}

impl PartialEq for ApproxComplex {
    fn eq(&self, other: &Self) -> bool {
        self.re.cmp(&other.re) == Some(0)
            && self.im.cmp(&other.im) == Some(0)
            && self.err == other.err
    }
}

impl fmt::Display for ApproxComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = self.re_f64();
        let im = self.im_f64();
        if im == 0.0 {
            write!(f, "{re}")
        } else if im < 0.0 {
            write!(f, "{re}-{}*i", -im)
        } else {
            write!(f, "{re}+{im}*i")
        }
    }
}

/// cos/sin of `2*pi*k/n` at `prec` bits, with a per-component error bound.
/// Computed with 32 guard bits, so the claimed radius is very loose.
pub(crate) fn root_of_unity(n: u32, k: u32, prec: usize) -> (BigFloat, BigFloat, f64) {
    let pc = prec + 32;
    let k = k % n;
    with_consts(|cc| {
        let pi = cc.pi(pc, RM);
        let theta = pi
            .mul(&BigFloat::from_u64(2 * k as u64, pc), pc, RM)
            .div(&BigFloat::from_u64(n as u64, pc), pc, RM);
        let cos = theta.cos(pc, RM, cc);
        let sin = theta.sin(pc, RM, cc);
        (cos, sin, pow2(8 - prec.min(900) as i32))
    })
}

fn parse_component(text: &str, prec: usize) -> Result<BigFloat> {
    // validate the grammar with the strict f64 parser first
    text.parse::<f64>().map_err(|_| Error::ScalarLiteral {
        text: text.to_string(),
        msg: "bad decimal literal".to_string(),
    })?;
    let b = with_consts(|cc| BigFloat::parse(text, astro_float::Radix::Dec, prec, RM, cc));
    if b.is_nan() {
        return Err(Error::ScalarLiteral {
            text: text.to_string(),
            msg: "bad decimal literal".to_string(),
        });
    }
    Ok(b)
}

impl Scalar for ApproxComplex {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn zero() -> Self {
        Self::from_f64s(0.0, 0.0, DEFAULT_PRECISION)
    }

    fn one() -> Self {
        Self::from_f64s(1.0, 0.0, DEFAULT_PRECISION)
    }

    fn from_int(k: i64) -> Self {
        ApproxComplex {
            re: BigFloat::from_i64(k, DEFAULT_PRECISION),
            im: BigFloat::from_u64(0, 64),
            err: 0.0,
            prec: DEFAULT_PRECISION,
        }
    }

    fn from_rational(r: &Rational) -> Self {
        Self::from_rational(r, DEFAULT_PRECISION)
    }

    fn from_cyclotomic(c: &CyclotomicNumber) -> Result<Self> {
        Ok(c.embed(DEFAULT_PRECISION))
    }

    fn add(&self, rhs: &Self) -> Self {
        self.add_ac(rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.sub_ac(rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.mul_ac(rhs)
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        self.div_ac(rhs)
    }

    fn neg(&self) -> Self {
        self.neg_ac()
    }

    fn conj(&self) -> Self {
        self.conj_ac()
    }

    fn halve(&self) -> Self {
        self.halve_ac()
    }

    fn is_zero(&self) -> bool {
        self.is_exactly_zero()
    }

    fn could_be_zero(&self) -> bool {
        self.re_f64().hypot(self.im_f64()) <= self.err * (1.0 + 1e-9) + 1e-315
    }

    fn embed(&self, _prec: usize) -> ApproxComplex {
        self.clone()
    }

    fn to_rational(&self) -> Option<Rational> {
        None
    }

    fn sign_real(&self) -> SignDecision {
        self.sign_real_certified()
    }

    fn parse(text: &str, prec: usize) -> Result<Self> {
        let (re_text, im_text) = super::gaussian::split_complex_literal(text)?;
        let re = parse_component(re_text, prec)?;
        let im = match im_text {
            Some(t) => parse_component(t, prec)?,
            None => BigFloat::from_u64(0, 64),
        };
        let err = rounding(bf_to_f64(&re).abs() + bf_to_f64(&im).abs(), prec) * 2.0;
        Ok(ApproxComplex { re, im, err, prec })
    }

    fn error_radius(&self) -> f64 {
        self.err
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn rational_embedding_is_tight() {
        let x = ApproxComplex::from_rational(&rat(6185, 128), 128);
        assert_eq!(x.re_f64(), 48.3203125);
        assert!(x.error() <= 48.33 * 2f64.powi(-100));
        assert_eq!(x.sign_real_certified(), SignDecision::Positive);
    }

    #[test]
    fn arithmetic_tracks_radii() {
        let a = ApproxComplex::from_f64s(3.0, 4.0, 128);
        let b = ApproxComplex::from_f64s(1.0, -2.0, 128);
        let p = a.mul_ac(&b);
        // (3+4i)(1-2i) = 11 - 2i
        assert!((p.re_f64() - 11.0).abs() < 1e-25);
        assert!((p.im_f64() + 2.0).abs() < 1e-25);
        assert!(p.error() < 1e-30);
        let q = p.div_ac(&b).unwrap();
        assert!(q.consistent_with(&a));
        assert!(q.sub_ac(&a).modulus_upper() < 1e-30);
    }

    #[test]
    fn exact_cancellation_keeps_zero_value() {
        let a = ApproxComplex::from_rational(&rat(1, 3), 128);
        let d = a.sub_ac(&a);
        assert_eq!(d.re_f64(), 0.0);
        assert!(d.error() > 0.0); // the inputs were rounded
        assert_eq!(d.sign_real_certified(), SignDecision::Inconclusive);
    }

    #[test]
    fn division_by_uncertain_zero_is_an_error() {
        let z = ApproxComplex::from_f64s(0.0, 0.0, 128);
        let one = ApproxComplex::one();
        assert!(matches!(one.div_ac(&z), Err(Error::DivisionByUncertainZero { .. })));
        let fuzzy = ApproxComplex::from_f64s(1e-300, 0.0, 128).widen_error(1e-200);
        assert!(one.div_ac(&fuzzy).is_err());
    }

    #[test]
    fn sqrt_certifies_both_branches() {
        let four = ApproxComplex::from_int(4);
        let two = four.sqrt_real_nonneg().unwrap();
        assert!((two.re_f64() - 2.0).abs() < 1e-30);
        let near_zero = ApproxComplex::real_from_f64(1e-40, 128).widen_error(1e-39);
        let r = near_zero.sqrt_real_nonneg().unwrap();
        assert!(r.error() < 1e-19);
        let neg = ApproxComplex::from_int(-1);
        assert!(neg.sqrt_real_nonneg().is_err());
    }

    #[test]
    fn float_literals_parse() {
        let x = ApproxComplex::parse("1.5", 128).unwrap();
        assert_eq!(x.re_f64(), 1.5);
        let z = ApproxComplex::parse("-0.5+2e-3*i", 128).unwrap();
        assert_eq!(z.re_f64(), -0.5);
        assert!((z.im_f64() - 2e-3).abs() < 1e-30);
        assert!(ApproxComplex::parse("abc", 128).is_err());
    }

    #[test]
    fn halving_is_exact() {
        let x = ApproxComplex::from_int(3);
        let h = x.halve_ac();
        assert_eq!(h.re_f64(), 1.5);
        assert_eq!(h.error(), 0.0);
    }
}
