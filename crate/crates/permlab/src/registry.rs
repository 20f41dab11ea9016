//! The named counterexample instances with their published values, and the
//! aggregate re-verification of every such value.
//!
//! Each instance carries a list of checks pairing a quantity with its
//! expected value; `verify` recomputes all of them from the stored matrix
//! and fails loudly (naming the quantity) on the first mismatch, so a
//! passing instance is usable as ground truth in tests and searches.

use serde::Serialize;

use crate::conjectures::hadamard::{bapat_sunder, chollet};
use crate::conjectures::spectral::pot_check;
use crate::conjectures::{ConjectureReport, Verdict};
use crate::error::{Error, Result};
use crate::matrix::eigen::eigenvalues_hermitian;
use crate::matrix::factor::rank_exact;
use crate::matrix::{gram_from_rows, SquareMatrix};
use crate::permanent::permanent;
use crate::scalar::{rat, CyclotomicNumber, GaussianRational, Scalar, DEFAULT_PRECISION};
use crate::schur::schur_power;

/// A matrix with published values attached.  `verify` must pass before the
/// instance is trusted anywhere else.
pub struct NamedInstance<T: Scalar> {
    pub name: &'static str,
    pub note: &'static str,
    pub matrix: SquareMatrix<T>,
    checks: Vec<Check<T>>,
}

/// One published quantity and its expected value.
enum Check<T: Scalar> {
    /// Entry equals an exact value.
    Entry { row: usize, col: usize, expected: T },
    /// The matrix is exactly the Gram matrix of these vectors.
    GramOf { rows: Vec<Vec<T>> },
    /// `per` equals an exact value.
    Permanent { expected: T },
    /// `per(A o conj A)` equals an exact value.
    ConjHadamardPermanent { expected: T },
    /// Exact rank.
    Rank { expected: usize },
    /// Certified eigenvalues match, ascending, within `tol` plus the
    /// solver's own bound.
    Eigenvalues { expected: Vec<f64>, tol: f64 },
    /// `A^2 = scale * A` exactly; with the rank check this pins every
    /// nonzero eigenvalue to `scale` exactly.
    MinimalQuadratic { scale: T },
    /// Rank of the Schur power matrix `pi(A)`.
    SchurRank { expected: usize },
    /// `lambda_max(pi(A))` within a relative tolerance, certified.
    SchurLambdaMax { expected: f64, rel_tol: f64 },
    /// The permanent-on-top margin `per A - lambda_max(pi(A))` is
    /// certified negative.
    PotViolated,
    /// `per(A o conj A) / per A` equals an exact ratio (the Bapat-Sunder
    /// ratio, since `conj A` has unit diagonal here).
    BapatSunderConjRatio { expected: T },
    /// Chollet holds on the pair `(A, conj A)`.
    CholletConjHolds,
}

/// A re-verified quantity: what was expected and what was computed.
#[derive(Debug, Clone, Serialize)]
pub struct VerifiedValue {
    pub quantity: String,
    pub expected: String,
    pub observed: String,
}

impl<T: Scalar> NamedInstance<T> {
    /// Recompute every published value; the first mismatch aborts with the
    /// offending quantity.
    pub fn verify(&self) -> Result<Vec<VerifiedValue>> {
        let mut out = Vec::with_capacity(self.checks.len());
        for check in &self.checks {
            out.push(self.run(check)?);
        }
        Ok(out)
    }

    fn run(&self, check: &Check<T>) -> Result<VerifiedValue> {
        let m = &self.matrix;
        match check {
            Check::Entry { row, col, expected } => {
                let observed = m.at(*row, *col);
                confirm(
                    &format!("entry({},{})", row + 1, col + 1),
                    expected.to_string(),
                    observed.to_string(),
                    observed.sub(expected).is_zero(),
                )
            }
            Check::GramOf { rows } => {
                let gram = gram_from_rows(rows)?;
                let matches = gram == *m;
                confirm(
                    "gram factorization",
                    "displayed matrix".to_string(),
                    if matches {
                        "displayed matrix".to_string()
                    } else {
                        "a different matrix".to_string()
                    },
                    matches,
                )
            }
            Check::Permanent { expected } => {
                let observed = permanent(m)?.value;
                confirm(
                    "per",
                    expected.to_string(),
                    observed.to_string(),
                    observed.sub(expected).is_zero(),
                )
            }
            Check::ConjHadamardPermanent { expected } => {
                let observed = permanent(&m.hadamard(&m.conj_entries())?)?.value;
                confirm(
                    "per(A o conj A)",
                    expected.to_string(),
                    observed.to_string(),
                    observed.sub(expected).is_zero(),
                )
            }
            Check::Rank { expected } => {
                let observed = rank_exact(m)?;
                confirm(
                    "rank",
                    expected.to_string(),
                    observed.to_string(),
                    observed == *expected,
                )
            }
            Check::Eigenvalues { expected, tol } => {
                let spectrum = eigenvalues_hermitian(m, DEFAULT_PRECISION)?;
                let ok = spectrum.values.len() == expected.len()
                    && spectrum
                        .values
                        .iter()
                        .zip(expected)
                        .all(|(o, e)| (o - e).abs() <= tol + spectrum.bound);
                confirm(
                    "eigenvalues",
                    format!("{expected:?}"),
                    format!("{:?} (± {:.3e})", spectrum.values, spectrum.bound),
                    ok,
                )
            }
            Check::MinimalQuadratic { scale } => {
                let squared = m.matmul(m)?;
                let scaled = m.map(|e| e.mul(scale));
                confirm(
                    "minimal polynomial",
                    format!("A^2 = {scale} A"),
                    if squared == scaled {
                        format!("A^2 = {scale} A")
                    } else {
                        "A^2 differs".to_string()
                    },
                    squared == scaled,
                )
            }
            Check::SchurRank { expected } => {
                let observed = schur_power(m)?.spectral_summary()?.rank;
                confirm(
                    "rank of pi(A)",
                    expected.to_string(),
                    observed.to_string(),
                    observed == *expected,
                )
            }
            Check::SchurLambdaMax { expected, rel_tol } => {
                let spectrum = schur_power(m)?.compression_spectrum()?;
                let observed = spectrum.lambda_max();
                let slack = expected.abs() * rel_tol + spectrum.bound;
                confirm(
                    "lambda_max(pi(A))",
                    format!("{expected}"),
                    format!("{observed} (± {:.3e})", spectrum.bound),
                    (observed - expected).abs() <= slack,
                )
            }
            Check::PotViolated => {
                let summary = schur_power(m)?.spectral_summary()?;
                let margin = summary.pot_margin;
                confirm(
                    "permanent-on-top margin",
                    "certified negative".to_string(),
                    format!("{} ± {:.3e}", margin.value, margin.err),
                    margin.value + margin.err < 0.0,
                )
            }
            Check::BapatSunderConjRatio { expected } => {
                let per_had = permanent(&m.hadamard(&m.conj_entries())?)?.value;
                let per_a = permanent(m)?.value;
                let observed = per_had.div(&per_a)?;
                confirm(
                    "per(A o conj A) / per A",
                    expected.to_string(),
                    observed.to_string(),
                    observed.sub(expected).is_zero(),
                )
            }
            Check::CholletConjHolds => {
                let report = chollet(m, &m.conj_entries())?;
                confirm(
                    "chollet on (A, conj A)",
                    "holds".to_string(),
                    format!("{:?}", report.verdict),
                    report.verdict == Verdict::Holds,
                )
            }
        }
    }
}

fn confirm(
    quantity: &str,
    expected: String,
    observed: String,
    ok: bool,
) -> Result<VerifiedValue> {
    if ok {
        Ok(VerifiedValue {
            quantity: quantity.to_string(),
            expected,
            observed,
        })
    } else {
        Err(Error::Mismatch {
            quantity: quantity.to_string(),
            expected,
            observed,
        })
    }
}

/// The 5x5 rank-2 Gram counterexample to the permanent-on-top conjecture.
pub fn builtin_shchesnovich() -> NamedInstance<GaussianRational> {
    let g = GaussianRational::from_ints;
    let u: Vec<GaussianRational> = [(4, 2), (2, -3), (-4, -4), (-3, 4), (1, 0)]
        .iter()
        .map(|&(re, im)| g(re, im))
        .collect();
    let v: Vec<GaussianRational> = [(2, -4), (0, -3), (2, -4), (0, -3), (-5, -7)]
        .iter()
        .map(|&(re, im)| g(re, im))
        .collect();

    // the displayed matrix, entry by entry
    let display: [[(i64, i64); 5]; 5] = [
        [(40, 0), (14, -22), (-4, -8), (8, 16), (22, -36)],
        [(14, 22), (22, 0), (16, -14), (-9, -1), (23, -12)],
        [(-4, 8), (16, 14), (52, 0), (8, -34), (14, -30)],
        [(8, -16), (-9, 1), (8, 34), (34, 0), (18, -19)],
        [(22, 36), (23, 12), (14, 30), (18, 19), (75, 0)],
    ];
    let matrix = SquareMatrix::from_fn(5, |i, j| {
        let (re, im) = display[i][j];
        g(re, im)
    });

    NamedInstance {
        name: "shchesnovich",
        note: "5x5 rank-2 Gram matrix of two Gaussian-integer vectors; \
               the first counterexample to the permanent-on-top conjecture",
        matrix,
        checks: vec![
            Check::GramOf { rows: vec![u, v] },
            Check::Entry {
                row: 0,
                col: 1,
                expected: g(14, -22),
            },
            Check::Permanent {
                expected: g(814_016_640, 0),
            },
            Check::Rank { expected: 2 },
            Check::Eigenvalues {
                expected: vec![0.0, 0.0, 0.0, 91.0, 132.0],
                tol: 1e-6,
            },
            Check::SchurRank { expected: 27 },
            Check::PotViolated,
        ],
    }
}

/// `(zeta_40^p + zeta_40^q) / 2`.
fn half_sum(p: i64, q: i64) -> CyclotomicNumber {
    CyclotomicNumber::from_powers(
        40,
        &[
            (p.rem_euclid(40) as u32, rat(1, 2)),
            (q.rem_euclid(40) as u32, rat(1, 2)),
        ],
    )
}

/// `(1/sqrt 2) e^{p i pi / 5}`: with `e^{i pi/5} = zeta_40^4` and
/// `1/sqrt 2 = (zeta_40^5 + zeta_40^-5)/2`, this is
/// `(zeta^(5+4p) + zeta^(-5+4p))/2`.
fn s_phase(p: i64) -> CyclotomicNumber {
    half_sum(5 + 4 * p, -5 + 4 * p)
}

/// `cos(pi/5) e^{sign i pi/5} = (1 + zeta_40^(sign 8))/2`.
fn c1_phase(sign: i64) -> CyclotomicNumber {
    half_sum(0, sign * 8)
}

/// `cos(2 pi/5) e^{sign 2 i pi/5} = (1 + zeta_40^(sign 16))/2`.
fn c2_phase(sign: i64) -> CyclotomicNumber {
    half_sum(0, sign * 16)
}

/// The 7x7 rank-2 correlation counterexample to the Bapat-Sunder
/// conjecture, over the conductor-40 cyclotomic field.
pub fn builtin_drury() -> NamedInstance<CyclotomicNumber> {
    let one = CyclotomicNumber::one();
    let zero = CyclotomicNumber::zero();
    let s0 = s_phase(0);

    let rows: [Vec<CyclotomicNumber>; 7] = [
        vec![
            one.clone(),
            zero.clone(),
            s0.clone(),
            s0.clone(),
            s0.clone(),
            s0.clone(),
            s0.clone(),
        ],
        vec![
            zero,
            one.clone(),
            s_phase(4),
            s_phase(2),
            s0.clone(),
            s_phase(-2),
            s_phase(-4),
        ],
        vec![
            s0.clone(),
            s_phase(-4),
            one.clone(),
            c1_phase(-1),
            c2_phase(-1),
            c2_phase(1),
            c1_phase(1),
        ],
        vec![
            s0.clone(),
            s_phase(-2),
            c1_phase(1),
            one.clone(),
            c1_phase(-1),
            c2_phase(-1),
            c2_phase(1),
        ],
        vec![
            s0.clone(),
            s0.clone(),
            c2_phase(1),
            c1_phase(1),
            one.clone(),
            c1_phase(-1),
            c2_phase(-1),
        ],
        vec![
            s0.clone(),
            s_phase(2),
            c2_phase(-1),
            c2_phase(1),
            c1_phase(1),
            one.clone(),
            c1_phase(-1),
        ],
        vec![
            s0.clone(),
            s_phase(4),
            c1_phase(-1),
            c2_phase(-1),
            c2_phase(1),
            c1_phase(1),
            one,
        ],
    ];
    let matrix = SquareMatrix::from_fn(7, |i, j| rows[i][j].clone());

    NamedInstance {
        name: "drury",
        note: "7x7 rank-2 complex correlation matrix over the conductor-40 \
               cyclotomic field; with B = conj A it violates Bapat-Sunder",
        matrix,
        checks: vec![
            Check::Permanent {
                expected: CyclotomicNumber::from_rational(&rat(45, 1)),
            },
            Check::ConjHadamardPermanent {
                expected: CyclotomicNumber::from_rational(&rat(6185, 128)),
            },
            Check::Rank { expected: 2 },
            // lambda_max(A) = 3.5: A is PSD of rank 2 with trace 7, so
            // A^2 = 3.5 A holds iff both nonzero eigenvalues equal 3.5
            Check::MinimalQuadratic {
                scale: CyclotomicNumber::from_rational(&rat(7, 2)),
            },
            Check::SchurLambdaMax {
                expected: 65.625,
                rel_tol: 1e-6,
            },
            Check::PotViolated,
            Check::BapatSunderConjRatio {
                expected: CyclotomicNumber::from_rational(&rat(1237, 1152)),
            },
            Check::CholletConjHolds,
        ],
    }
}

/// One instance's verification transcript.
#[derive(Debug, Serialize)]
pub struct InstanceVerification {
    pub name: String,
    pub values: Vec<VerifiedValue>,
}

/// The aggregate re-verification: both builtin instances plus the
/// permanent-on-top, Bapat-Sunder, and Chollet checkers run on them.
#[derive(Debug, Serialize)]
pub struct PaperVerification {
    pub instances: Vec<InstanceVerification>,
    pub reports: Vec<ConjectureReport>,
}

/// Recompute every published value about the builtin instances.  Any
/// mismatch aborts with the offending quantity.
pub fn verify_paper() -> Result<PaperVerification> {
    let h = builtin_shchesnovich();
    let drury = builtin_drury();

    let mut instances = Vec::new();
    instances.push(InstanceVerification {
        name: h.name.to_string(),
        values: h.verify()?,
    });
    instances.push(InstanceVerification {
        name: drury.name.to_string(),
        values: drury.verify()?,
    });

    let mut reports = Vec::new();

    let pot_h = pot_check(&h.matrix)?;
    expect_verdict("permanent-on-top on the 5x5 instance", &pot_h, Verdict::Violated)?;
    reports.push(pot_h);

    let pot_drury = pot_check(&drury.matrix)?;
    expect_verdict("permanent-on-top on the 7x7 instance", &pot_drury, Verdict::Violated)?;
    reports.push(pot_drury);

    let conj = drury.matrix.conj_entries();
    let bs = bapat_sunder(&drury.matrix, &conj)?;
    expect_verdict(
        "bapat-sunder on the 7x7 pair",
        &bs[0],
        Verdict::Violated,
    )?;
    reports.extend(bs);

    let ch = chollet(&drury.matrix, &conj)?;
    expect_verdict("chollet on the 7x7 pair", &ch, Verdict::Holds)?;
    reports.push(ch);

    Ok(PaperVerification { instances, reports })
}

fn expect_verdict(quantity: &str, report: &ConjectureReport, expected: Verdict) -> Result<()> {
    if report.verdict == expected {
        Ok(())
    } else {
        Err(Error::Mismatch {
            quantity: quantity.to_string(),
            expected: format!("{expected:?}"),
            observed: format!("{:?}", report.verdict),
        })
    }
}
