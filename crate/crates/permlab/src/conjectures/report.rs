//! The uniform report every checker returns: named inequality, both sides,
//! the margin `rhs - lhs` (oriented so nonnegative means "holds"), and a
//! verdict that can only be inconclusive when error radii genuinely overlap
//! zero — exact arithmetic always decides.

use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::matrix::SquareMatrix;
use crate::scalar::{Scalar, SignDecision};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "holds")]
    Holds,
    #[serde(rename = "violated")]
    Violated,
    #[serde(rename = "inconclusive-within-error")]
    InconclusiveWithinError,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::InconclusiveWithinError => "inconclusive-within-error",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CheckerName {
    #[serde(rename = "hadamard")]
    Hadamard,
    #[serde(rename = "fischer")]
    Fischer,
    #[serde(rename = "schur")]
    SchurInequality,
    #[serde(rename = "marcus")]
    Marcus,
    #[serde(rename = "lieb")]
    Lieb,
    #[serde(rename = "per-superadditive")]
    PerSuperadditive,
    #[serde(rename = "det-superadditive")]
    DetSuperadditive,
    #[serde(rename = "permanent-dominance")]
    PermanentDominance,
    #[serde(rename = "pot")]
    Pot,
    #[serde(rename = "smallest-eigen-is-det")]
    SmallestEigenIsDet,
    #[serde(rename = "bapat-sunder")]
    BapatSunder,
    #[serde(rename = "bapat-sunder-correlation")]
    BapatSunderCorrelation,
    #[serde(rename = "bapat-sunder-per-max")]
    BapatSunderPerMax,
    #[serde(rename = "chollet")]
    Chollet,
    #[serde(rename = "chollet-self")]
    CholletSelf,
    #[serde(rename = "zfz-result5")]
    ZfzResult5,
    #[serde(rename = "per-in-per")]
    PerInPer,
    #[serde(rename = "per-in-per-scaled")]
    PerInPerScaled,
    #[serde(rename = "det-in-det")]
    DetInDet,
    #[serde(rename = "foregger")]
    Foregger,
    #[serde(rename = "max-per-unitary")]
    MaxPerUnitary,
    #[serde(rename = "brualdi")]
    Brualdi,
    #[serde(rename = "per-tensor")]
    PerTensor,
    #[serde(rename = "ando")]
    Ando,
    #[serde(rename = "marcus-tensor")]
    MarcusTensor,
    #[serde(rename = "pate")]
    Pate,
    #[serde(rename = "hadamard-kronecker")]
    HadamardKronecker,
    #[serde(rename = "drury-eq22")]
    DruryEq22,
    #[serde(rename = "drury-eq23")]
    DruryEq23,
    #[serde(rename = "drury-first-row")]
    DruryFirstRow,
    #[serde(rename = "hadamard-compression")]
    HadamardCompression,
    #[serde(rename = "oppenheim-dilation")]
    OppenheimDilation,
    #[serde(rename = "oppenheim")]
    Oppenheim,
    #[serde(rename = "hadamard-power")]
    HadamardPower,
}

impl CheckerName {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckerName::Hadamard => "hadamard",
            CheckerName::Fischer => "fischer",
            CheckerName::SchurInequality => "schur",
            CheckerName::Marcus => "marcus",
            CheckerName::Lieb => "lieb",
            CheckerName::PerSuperadditive => "per-superadditive",
            CheckerName::DetSuperadditive => "det-superadditive",
            CheckerName::PermanentDominance => "permanent-dominance",
            CheckerName::Pot => "pot",
            CheckerName::SmallestEigenIsDet => "smallest-eigen-is-det",
            CheckerName::BapatSunder => "bapat-sunder",
            CheckerName::BapatSunderCorrelation => "bapat-sunder-correlation",
            CheckerName::BapatSunderPerMax => "bapat-sunder-per-max",
            CheckerName::Chollet => "chollet",
            CheckerName::CholletSelf => "chollet-self",
            CheckerName::ZfzResult5 => "zfz-result5",
            CheckerName::PerInPer => "per-in-per",
            CheckerName::PerInPerScaled => "per-in-per-scaled",
            CheckerName::DetInDet => "det-in-det",
            CheckerName::Foregger => "foregger",
            CheckerName::MaxPerUnitary => "max-per-unitary",
            CheckerName::Brualdi => "brualdi",
            CheckerName::PerTensor => "per-tensor",
            CheckerName::Ando => "ando",
            CheckerName::MarcusTensor => "marcus-tensor",
            CheckerName::Pate => "pate",
            CheckerName::HadamardKronecker => "hadamard-kronecker",
            CheckerName::DruryEq22 => "drury-eq22",
            CheckerName::DruryEq23 => "drury-eq23",
            CheckerName::DruryFirstRow => "drury-first-row",
            CheckerName::HadamardCompression => "hadamard-compression",
            CheckerName::OppenheimDilation => "oppenheim-dilation",
            CheckerName::Oppenheim => "oppenheim",
            CheckerName::HadamardPower => "hadamard-power",
        }
    }
}

impl fmt::Display for CheckerName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A scalar captured for a report: its exact display form, an f64
/// approximation for quick reading, and the error radius (0 when exact).
#[derive(Clone, Debug, Serialize)]
pub struct Reported {
    pub text: String,
    pub approx: f64,
    pub err: f64,
}

impl Reported {
    pub fn from_scalar<T: Scalar>(x: &T) -> Self {
        Reported {
            text: x.to_string(),
            approx: x.embed(64).re_f64(),
            err: x.error_radius(),
        }
    }

    pub fn from_parts(text: String, approx: f64, err: f64) -> Self {
        Reported { text, approx, err }
    }

    pub fn from_certified(value: f64, err: f64) -> Self {
        Reported {
            text: format!("{value} +- {err:.3e}"),
            approx: value,
            err,
        }
    }
}

/// What went in: a content digest plus the dimensions, so reports can be
/// matched to inputs without embedding whole matrices.
#[derive(Clone, Debug, Serialize)]
pub struct InputSummary {
    pub digest: String,
    pub dims: Vec<usize>,
}

impl InputSummary {
    pub fn of_matrix<T: Scalar>(a: &SquareMatrix<T>) -> Self {
        Self::of_matrices(std::slice::from_ref(a))
    }

    pub fn of_matrices<T: Scalar>(ms: &[SquareMatrix<T>]) -> Self {
        let mut hasher = Sha256::new();
        let mut dims = Vec::new();
        for a in ms {
            dims.push(a.size());
            hasher.update(format!("{}|{}|", a.size(), T::NAME).as_bytes());
            for i in 0..a.size() {
                for j in 0..a.size() {
                    hasher.update(a.at(i, j).to_string().as_bytes());
                    hasher.update(b",");
                }
            }
            hasher.update(b";");
        }
        InputSummary {
            digest: hex_lower(&hasher.finalize()),
            dims,
        }
    }
}

fn hex_lower(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub name: CheckerName,
    pub inputs: InputSummary,
    pub lhs: Reported,
    pub rhs: Reported,
    pub margin: Reported,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl ConjectureReport {
    /// Report for `lhs <= rhs`, margin `rhs - lhs`, ties hold.
    pub fn inequality<T: Scalar>(
        name: CheckerName,
        inputs: InputSummary,
        lhs: &T,
        rhs: &T,
    ) -> Self {
        let margin = rhs.sub(lhs);
        let verdict = inequality_verdict(&margin);
        ConjectureReport {
            name,
            inputs,
            lhs: Reported::from_scalar(lhs),
            rhs: Reported::from_scalar(rhs),
            margin: Reported::from_scalar(&margin),
            verdict,
            witness: None,
        }
    }

    /// Report for `lhs = rhs` up to the combined error radius.
    pub fn equality<T: Scalar>(
        name: CheckerName,
        inputs: InputSummary,
        lhs: &T,
        rhs: &T,
    ) -> Self {
        let margin = rhs.sub(lhs);
        let verdict = equality_verdict(&margin);
        ConjectureReport {
            name,
            inputs,
            lhs: Reported::from_scalar(lhs),
            rhs: Reported::from_scalar(rhs),
            margin: Reported::from_scalar(&margin),
            verdict,
            witness: None,
        }
    }

    /// Report built from pre-certified float quantities (used where one side
    /// comes out of an eigensolve rather than scalar arithmetic).
    pub fn from_certified(
        name: CheckerName,
        inputs: InputSummary,
        lhs: Reported,
        rhs: Reported,
        equality: bool,
    ) -> Self {
        let margin_value = rhs.approx - lhs.approx;
        let margin_err = rhs.err + lhs.err;
        let verdict = if equality {
            if margin_value.abs() <= margin_err || margin_value == 0.0 {
                Verdict::Holds
            } else {
                Verdict::Violated
            }
        } else if margin_value - margin_err >= 0.0 {
            Verdict::Holds
        } else if margin_value + margin_err < 0.0 {
            Verdict::Violated
        } else {
            Verdict::InconclusiveWithinError
        };
        ConjectureReport {
            name,
            inputs,
            lhs,
            rhs,
            margin: Reported::from_certified(margin_value, margin_err),
            verdict,
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: String) -> Self {
        self.witness = Some(witness);
        self
    }
}

/// Verdict for `margin >= 0` claims. Exact scalars always decide; certified
/// floats whose interval straddles zero are inconclusive, never violated.
pub fn inequality_verdict<T: Scalar>(margin: &T) -> Verdict {
    match margin.sign_real() {
        SignDecision::Positive | SignDecision::Zero => Verdict::Holds,
        SignDecision::Negative => Verdict::Violated,
        SignDecision::Inconclusive => Verdict::InconclusiveWithinError,
    }
}

/// Verdict for `margin = 0` claims: a margin indistinguishable from zero at
/// its own error radius confirms the equality; a distinguishable one refutes
/// it.
pub fn equality_verdict<T: Scalar>(margin: &T) -> Verdict {
    match margin.sign_real() {
        SignDecision::Zero | SignDecision::Inconclusive => Verdict::Holds,
        _ => Verdict::Violated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, ApproxComplex, Rational};

    #[test]
    fn orientation() {
        let i2 = SquareMatrix::<Rational>::identity(2);
        let inputs = InputSummary::of_matrix(&i2);
        let r = ConjectureReport::inequality(
            CheckerName::Marcus,
            inputs.clone(),
            &rat_int(3),
            &rat_int(5),
        );
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.margin.text, "2");
        let r = ConjectureReport::inequality(
            CheckerName::Marcus,
            inputs.clone(),
            &rat_int(5),
            &rat_int(3),
        );
        assert_eq!(r.verdict, Verdict::Violated);
        // ties hold
        let r = ConjectureReport::inequality(
            CheckerName::Marcus,
            inputs,
            &rat(1, 2),
            &rat(1, 2),
        );
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn float_margins_near_zero_are_inconclusive() {
        let a = SquareMatrix::<ApproxComplex>::identity(2);
        let inputs = InputSummary::of_matrix(&a);
        let x = ApproxComplex::from_f64s(1.0, 0.0, 64);
        let y = x.add(&ApproxComplex::from_f64s(1e-30, 0.0, 64).widen_error(1e-25));
        let r = ConjectureReport::inequality(CheckerName::Pot, inputs.clone(), &y, &x);
        assert_eq!(r.verdict, Verdict::InconclusiveWithinError);
        // clearly violated still reports violated
        let z = x.add(&ApproxComplex::from_f64s(1.0, 0.0, 64));
        let r = ConjectureReport::inequality(CheckerName::Pot, inputs, &z, &x);
        assert_eq!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn equality_semantics() {
        let i2 = SquareMatrix::<Rational>::identity(2);
        let inputs = InputSummary::of_matrix(&i2);
        let r = ConjectureReport::equality(
            CheckerName::SmallestEigenIsDet,
            inputs.clone(),
            &rat_int(4),
            &rat_int(4),
        );
        assert_eq!(r.verdict, Verdict::Holds);
        let r = ConjectureReport::equality(
            CheckerName::SmallestEigenIsDet,
            inputs,
            &rat_int(4),
            &rat_int(5),
        );
        assert_eq!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn digests_distinguish_inputs() {
        let a = SquareMatrix::<Rational>::identity(2);
        let b = SquareMatrix::<Rational>::all_ones(2);
        assert_ne!(
            InputSummary::of_matrix(&a).digest,
            InputSummary::of_matrix(&b).digest
        );
        assert_eq!(
            InputSummary::of_matrix(&a).digest,
            InputSummary::of_matrix(&a.clone()).digest
        );
        assert_eq!(InputSummary::of_matrices(&[a, b]).dims, vec![2, 2]);
    }

    #[test]
    fn json_shape() {
        let i2 = SquareMatrix::<Rational>::identity(2);
        let r = ConjectureReport::inequality(
            CheckerName::BapatSunder,
            InputSummary::of_matrix(&i2),
            &rat_int(1),
            &rat_int(2),
        );
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"name\":\"bapat-sunder\""));
        assert!(json.contains("\"verdict\":\"holds\""));
        assert!(!json.contains("witness"));
        let with = r.with_witness("X".to_string());
        assert!(serde_json::to_string(&with).unwrap().contains("\"witness\":\"X\""));
    }
}
