//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! A value is a rational polynomial in `zeta_N = exp(2*pi*i/N)`, kept
//! eagerly reduced modulo the N-th cyclotomic polynomial, so representations
//! are canonical and equality is coefficient equality (after lifting to a
//! common conductor). Reduction tables per conductor are built once and
//! cached process-wide.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use ipoly::cyclotomic_poly;

use super::approx::{root_of_unity, ApproxComplex};
use super::{parse_rational, GaussianRational, Rational, Scalar, SignDecision};
use crate::error::{Error, Result};

/// Largest conductor accepted from input; keeps reduction tables small.
pub const MAX_CONDUCTOR: u32 = 128;

/// Internal ceiling for conductors produced by lifting to least common
/// multiples; generously above anything reachable from parsed input.
const TABLE_HARD_CAP: u32 = 20_000;

/// Integer polynomials, used only to compute cyclotomic polynomials. Kept in
/// a private module so `num_traits` method names never collide with
/// [`Scalar`] methods on rationals.
mod ipoly {
    use std::collections::HashMap;

    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    /// Exact division by a monic divisor; panics if the division is not exact
    /// (it always is for quotients of products of cyclotomic polynomials).
    fn div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
        let den = trim(den.to_vec());
        let mut rem = trim(num.to_vec());
        assert!(den.last().is_some_and(|c| c.is_one()), "divisor not monic");
        let d = den.len() - 1;
        if rem.len() < den.len() {
            assert!(rem.is_empty(), "inexact polynomial division");
            return vec![];
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let c = rem.last().unwrap().clone();
            quot[k] = c.clone();
            for (j, dj) in den.iter().enumerate() {
                let t = dj * &c;
                rem[k + j] -= t;
            }
            rem = trim(rem);
        }
        assert!(rem.is_empty(), "inexact polynomial division");
        quot
    }

    pub(super) fn cyclotomic_poly(n: u32, memo: &mut HashMap<u32, Vec<BigInt>>) -> Vec<BigInt> {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        // Phi_n = (x^n - 1) / prod of Phi_d over proper divisors d
        let mut q = vec![BigInt::zero(); n as usize + 1];
        q[0] = -BigInt::one();
        q[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                let fd = cyclotomic_poly(d, memo);
                q = div_exact(&q, &fd);
            }
        }
        memo.insert(n, q.clone());
        q
    }
}

// ---------------------------------------------------------------------------
// rational polynomials, used for inversion via the extended Euclid algorithm

fn rpoly_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rpoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    rpoly_trim(out)
}

fn rpoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    rpoly_trim(out)
}

fn rpoly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let den = rpoly_trim(den.to_vec());
    let lead = den.last().expect("division by the zero polynomial").clone();
    let d = den.len() - 1;
    let mut rem = rpoly_trim(num.to_vec());
    if rem.len() <= d {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - d];
    while rem.len() > d {
        let k = rem.len() - 1 - d;
        let c = rem.last().unwrap() / &lead;
        quot[k] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            let t = dj * &c;
            rem[k + j] -= t;
        }
        rem = rpoly_trim(rem);
    }
    (quot, rem)
}

// ---------------------------------------------------------------------------
// per-conductor reduction tables

struct CycloTable {
    phi: usize,
    /// Minimal polynomial of zeta_n over Q, monic, length phi + 1.
    minpoly: Vec<Rational>,
    /// `reduce[k]` is `x^k mod Phi_n` in the basis 1, x, ..., x^(phi-1),
    /// for every k < n.
    reduce: Vec<Vec<Rational>>,
}

fn table(n: u32) -> Arc<CycloTable> {
    assert!(
        (1..=TABLE_HARD_CAP).contains(&n),
        "conductor {n} outside supported range"
    );
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<CycloTable>>>> = OnceLock::new();
    let cache = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(t) = guard.get(&n) {
        return t.clone();
    }
    let minpoly_int = cyclotomic_poly(n, &mut HashMap::new());
    let minpoly: Vec<Rational> = minpoly_int
        .iter()
        .map(|c| Rational::from_integer(c.clone()))
        .collect();
    let phi = minpoly.len() - 1;
    let mut reduce: Vec<Vec<Rational>> = Vec::with_capacity(n as usize);
    for k in 0..n as usize {
        let row = if k < phi {
            let mut row = vec![Rational::zero(); phi];
            row[k] = Rational::one();
            row
        } else {
            // x^k = x * x^(k-1), with x^phi = -(low-order part of Phi)
            let prev = &reduce[k - 1];
            let lead = prev[phi - 1].clone();
            let mut row = vec![Rational::zero(); phi];
            for i in 1..phi {
                row[i] = prev[i - 1].clone();
            }
            if !lead.is_zero() {
                for (i, m) in minpoly.iter().take(phi).enumerate() {
                    row[i] -= &lead * m;
                }
            }
            row
        };
        reduce.push(row);
    }
    let t = Arc::new(CycloTable { phi, minpoly, reduce });
    guard.insert(n, t.clone());
    t
}

// ---------------------------------------------------------------------------

/// An element of Q(zeta_n), reduced to the power basis of degree phi(n).
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    n: u32,
    c: Vec<Rational>,
}

/// `zeta_den ^ num`, with the fraction `num/den` reduced so the conductor is
/// minimal (e.g. `cyclo_make(40, 8)` is a primitive fifth root of unity).
pub fn cyclo_make(den: u32, num: u32) -> CyclotomicNumber {
    assert!(den >= 1, "root order must be positive");
    let num = num % den;
    if num == 0 {
        return CyclotomicNumber::from_powers(1, &[(0, Rational::one())]);
    }
    let g = num.gcd(&den);
    CyclotomicNumber::from_powers(den / g, &[(num / g, Rational::one())])
}

/// A primitive n-th root of unity.
pub fn zeta(n: u32) -> CyclotomicNumber {
    cyclo_make(n, 1)
}

impl CyclotomicNumber {
    /// Sum of `coeff * zeta_n^exp` terms; exponents are taken mod n.
    pub fn from_powers(n: u32, terms: &[(u32, Rational)]) -> Self {
        let t = table(n);
        let mut c = vec![Rational::zero(); t.phi];
        for (e, coeff) in terms {
            if coeff.is_zero() {
                continue;
            }
            let row = &t.reduce[(e % n) as usize];
            for (ci, ri) in c.iter_mut().zip(row) {
                *ci += coeff * ri;
            }
        }
        CyclotomicNumber { n, c }
    }

    pub fn from_rational_value(r: &Rational) -> Self {
        Self::from_powers(1, &[(0, r.clone())])
    }

    pub fn from_gaussian(g: &GaussianRational) -> Self {
        if g.im.is_zero() {
            Self::from_rational_value(&g.re)
        } else {
            Self::from_powers(4, &[(0, g.re.clone()), (1, g.im.clone())])
        }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.c
    }

    /// Re-express in Q(zeta_m); fails unless the current conductor divides m.
    pub fn try_lift(&self, m: u32) -> Result<Self> {
        if m == self.n {
            return Ok(self.clone());
        }
        if m % self.n != 0 {
            return Err(Error::ConductorLift(self.n, m));
        }
        let step = m / self.n;
        let terms: Vec<(u32, Rational)> = self
            .c
            .iter()
            .enumerate()
            .map(|(j, coeff)| (j as u32 * step % m, coeff.clone()))
            .collect();
        Ok(Self::from_powers(m, &terms))
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.n == b.n {
            return (a.clone(), b.clone());
        }
        let m = a.n.lcm(&b.n);
        (
            a.try_lift(m).expect("lcm is a multiple"),
            b.try_lift(m).expect("lcm is a multiple"),
        )
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CyclotomicNumber {
            n: self.n,
            c: self.c.iter().map(|x| x * r).collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if Scalar::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        let t = table(self.n);
        // extended Euclid over Q[x]: u * self = gcd (mod Phi_n); the gcd is a
        // nonzero constant because Phi_n is irreducible.
        let mut r0 = t.minpoly.clone();
        let mut r1 = rpoly_trim(self.c.clone());
        let mut u0: Vec<Rational> = vec![];
        let mut u1: Vec<Rational> = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, r) = rpoly_divmod(&r0, &r1);
            let un = rpoly_sub(&u0, &rpoly_mul(&q, &u1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = un;
        }
        debug_assert_eq!(r0.len(), 1);
        let g = r0[0].clone();
        let terms: Vec<(u32, Rational)> = u0
            .iter()
            .enumerate()
            .map(|(j, c)| (j as u32, c / &g))
            .collect();
        Ok(Self::from_powers(self.n, &terms))
    }

    pub fn embed_at(&self, prec: usize) -> ApproxComplex {
        let mut acc = ApproxComplex::from_f64s(0.0, 0.0, prec);
        for (j, coeff) in self.c.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let (cos, sin, err) = root_of_unity(self.n, j as u32, prec);
            let root = ApproxComplex::from_parts(cos, sin, 2.0 * err, prec);
            acc = acc.add_ac(&root.mul_ac(&ApproxComplex::from_rational(coeff, prec)));
        }
        acc
    }

    /// The value as an element of Q(i), when it is one.
    pub fn to_gaussian(&self) -> Option<GaussianRational> {
        if let Some(r) = Scalar::to_rational(self) {
            return Some(GaussianRational::new(r, Rational::zero()));
        }
        let m = self.n.lcm(&4);
        if m > TABLE_HARD_CAP {
            return None;
        }
        let f = self.try_lift(m).ok()?;
        let fc = f.conj();
        let two = Rational::from_integer(2.into());
        let re2 = f.add(&fc); // 2a
        let i = zeta(4).try_lift(m).ok()?;
        let im2 = f.sub(&fc).mul(&i.neg()); // (2ib)(-i) = 2b
        let a = Scalar::to_rational(&re2)? / &two;
        let b = Scalar::to_rational(&im2)? / &two;
        Some(GaussianRational::new(a, b))
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.c == other.c;
        }
        let m = self.n.lcm(&other.n);
        if m > TABLE_HARD_CAP {
            return false;
        }
        match (self.try_lift(m), other.try_lift(m)) {
            (Ok(a), Ok(b)) => a.c == b.c,
            _ => false,
        }
    }
}

impl Eq for CyclotomicNumber {}

impl Scalar for CyclotomicNumber {
    const EXACT: bool = true;
    const NAME: &'static str = "cyclotomic";

    fn zero() -> Self {
        CyclotomicNumber {
            n: 1,
            c: vec![Rational::zero()],
        }
    }

    fn one() -> Self {
        Self::from_rational_value(&Rational::one())
    }

    fn from_int(k: i64) -> Self {
        Self::from_rational_value(&Rational::from_integer(k.into()))
    }

    fn from_rational(r: &Rational) -> Self {
        Self::from_rational_value(r)
    }

    fn from_cyclotomic(c: &CyclotomicNumber) -> Result<Self> {
        Ok(c.clone())
    }

    fn add(&self, rhs: &Self) -> Self {
        let (mut a, b) = Self::common(self, rhs);
        for (x, y) in a.c.iter_mut().zip(&b.c) {
            *x += y;
        }
        a
    }

    fn sub(&self, rhs: &Self) -> Self {
        let (mut a, b) = Self::common(self, rhs);
        for (x, y) in a.c.iter_mut().zip(&b.c) {
            *x -= y;
        }
        a
    }

    fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = Self::common(self, rhs);
        let phi = a.c.len();
        let mut conv = vec![Rational::zero(); 2 * phi - 1];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        let terms: Vec<(u32, Rational)> = conv
            .into_iter()
            .enumerate()
            .map(|(e, coeff)| (e as u32, coeff))
            .collect();
        Self::from_powers(a.n, &terms)
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inverse()?))
    }

    fn neg(&self) -> Self {
        CyclotomicNumber {
            n: self.n,
            c: self.c.iter().map(|x| -x.clone()).collect(),
        }
    }

    fn conj(&self) -> Self {
        // complex conjugation maps zeta^j to zeta^(n-j)
        let terms: Vec<(u32, Rational)> = self
            .c
            .iter()
            .enumerate()
            .map(|(j, coeff)| ((self.n - j as u32) % self.n, coeff.clone()))
            .collect();
        Self::from_powers(self.n, &terms)
    }

    fn halve(&self) -> Self {
        self.scale(&(Rational::one() / Rational::from_integer(2.into())))
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    fn embed(&self, prec: usize) -> ApproxComplex {
        self.embed_at(prec)
    }

    fn to_rational(&self) -> Option<Rational> {
        self.c[1..]
            .iter()
            .all(|x| x.is_zero())
            .then(|| self.c[0].clone())
    }

    fn sign_real(&self) -> SignDecision {
        if Scalar::is_zero(self) {
            return SignDecision::Zero;
        }
        if *self != self.conj() {
            return SignDecision::Inconclusive;
        }
        // a nonzero real algebraic number is bounded away from zero, so the
        // interval decision succeeds once the precision is high enough
        let mut prec = 128;
        while prec <= 65536 {
            match self.embed_at(prec).sign_real_certified() {
                SignDecision::Inconclusive => prec *= 2,
                s => return s,
            }
        }
        unreachable!("sign of a nonzero real cyclotomic undecided at 65536 bits")
    }

    fn parse(text: &str, _prec: usize) -> Result<Self> {
        let text = text.trim();
        let bad = |msg: &str| Error::ScalarLiteral {
            text: text.to_string(),
            msg: msg.to_string(),
        };
        if let Some(rest) = text.strip_prefix("cyc(") {
            let (ntext, rest) = rest.split_once(')').ok_or_else(|| bad("missing ')'"))?;
            let n: u32 = ntext
                .trim()
                .parse()
                .map_err(|_| bad("bad conductor"))?;
            if n == 0 || n > MAX_CONDUCTOR {
                return Err(Error::SizeGuard(format!(
                    "conductor {n} outside 1..={MAX_CONDUCTOR}"
                )));
            }
            let inner = rest
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| bad("missing coefficient list"))?;
            let mut terms = Vec::new();
            if !inner.trim().is_empty() {
                for (j, part) in inner.split(',').enumerate() {
                    if j >= 8 * n as usize {
                        return Err(Error::SizeGuard("too many coefficients".to_string()));
                    }
                    terms.push((j as u32, parse_rational(part.trim())?));
                }
            }
            Ok(Self::from_powers(n, &terms))
        } else if text.ends_with("*i") {
            Ok(Self::from_gaussian(&GaussianRational::parse(text, 0)?))
        } else {
            Ok(Self::from_rational_value(&parse_rational(text)?))
        }
    }

    fn conductor(&self) -> u32 {
        self.n
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match Scalar::to_rational(self) {
            Some(r) => write!(f, "{r}"),
            None => {
                let last = self
                    .c
                    .iter()
                    .rposition(|x| !x.is_zero())
                    .expect("nonzero by the rational case");
                write!(f, "cyc({})[", self.n)?;
                for (j, coeff) in self.c[..=last].iter().enumerate() {
                    if j > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{coeff}")?;
                }
                write!(f, "]")
            }
        }
    }
}
