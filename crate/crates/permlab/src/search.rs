//! Seeded randomized violation search: streams exactly-liftable Gram
//! candidates through a registered checker, keeps the top candidates by
//! violation ratio, and serializes its whole state so a run can resume.
//!
//! Determinism: iteration `i` draws from an RNG keyed by `(seed, i)` alone,
//! so the candidate stream is independent of batching, worker count, and
//! interruption points; `run(a); run(b)` is byte-identical to `run(a+b)`.
//!
//! The float prefilter ranks candidates cheaply; a candidate is evaluated
//! exactly (and only then stored or counted as a violation) when its float
//! ratio either beats the current top-k floor or crosses the violation gate.

use std::path::Path;

use nalgebra::{Complex, DMatrix, DVector};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::conjectures::hadamard::{bapat_sunder, chollet};
use crate::conjectures::maximizer::per_f64;
use crate::conjectures::spectral::pot_check;
use crate::conjectures::{ConjectureReport, Verdict};
use crate::error::{Error, Result};
use crate::matrix::io::render_matrix;
use crate::matrix::SquareMatrix;
use crate::perm::{factorial, Permutation};
use crate::registry::{builtin_drury, builtin_shchesnovich};
use crate::sampling::{correlation_gram, real_correlation_gram, DYADIC_BITS};
use crate::scalar::{CyclotomicNumber, GaussianRational, Rational, Scalar};

/// Candidates kept per state.
pub const TOP_K: usize = 32;
/// Envelope marker of the state file.
pub const STATE_FORMAT: &str = "permlab-search-state";
/// Bumped whenever the serialized layout changes.
pub const STATE_VERSION: u32 = 1;

const BATCH: usize = 64;
/// A float ratio must beat the top-k floor by this much to trigger an exact
/// evaluation; keeps ties (ubiquitous for permanent-on-top, where the ratio
/// of every non-violating sample is 1) from re-running the exact checker.
const BEAT_EPS: f64 = 1e-12;

/// The checkers a search can target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchTarget {
    Pot,
    BapatSunder,
    Chollet,
}

impl SearchTarget {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "pot" => Ok(SearchTarget::Pot),
            "bapat-sunder" | "bapat_sunder" => Ok(SearchTarget::BapatSunder),
            "chollet" => Ok(SearchTarget::Chollet),
            other => Err(Error::UnknownChecker(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SearchTarget::Pot => "pot",
            SearchTarget::BapatSunder => "bapat-sunder",
            SearchTarget::Chollet => "chollet",
        }
    }
}

/// What gets sampled each iteration: random unit-vector Grams in a chosen
/// field, or one of the builtin instances pinned.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub dimension: usize,
    pub rank: usize,
    pub complex: bool,
    /// Sphere points are dyadic with this denominator exponent.
    pub bits: u32,
    /// Sample this builtin instance every iteration instead of random Grams.
    pub pin: Option<String>,
}

impl SamplerConfig {
    pub fn random(dimension: usize, rank: usize, complex: bool) -> Self {
        SamplerConfig {
            dimension,
            rank,
            complex,
            bits: DYADIC_BITS,
            pin: None,
        }
    }

    pub fn pinned(name: &str) -> Self {
        let (dimension, rank) = match name {
            "shchesnovich" => (5, 2),
            "drury" => (7, 2),
            _ => (0, 0),
        };
        SamplerConfig {
            dimension,
            rank,
            complex: true,
            bits: DYADIC_BITS,
            pin: Some(name.to_string()),
        }
    }

    fn validate(&self, target: SearchTarget) -> Result<()> {
        if let Some(pin) = &self.pin {
            if pin != "shchesnovich" && pin != "drury" {
                return Err(Error::Invalid(format!(
                    "unknown builtin instance `{pin}`; expected shchesnovich or drury"
                )));
            }
            return Ok(());
        }
        if self.dimension < 2 {
            return Err(Error::Invalid(
                "sampler dimension must be at least 2".to_string(),
            ));
        }
        if self.rank == 0 || self.rank > self.dimension {
            return Err(Error::Invalid(format!(
                "sampler rank {} outside 1..={}",
                self.rank, self.dimension
            )));
        }
        if self.bits == 0 || self.bits > 48 {
            return Err(Error::Invalid(format!(
                "dyadic bits {} outside 1..=48",
                self.bits
            )));
        }
        let cap = match target {
            // the Schur power grows as n!, and the prefilter builds it densely
            SearchTarget::Pot => 5,
            _ => 7,
        };
        if self.dimension > cap {
            return Err(Error::SizeGuard(format!(
                "{} search capped at n = {cap}, got n = {}",
                target.name(),
                self.dimension
            )));
        }
        Ok(())
    }
}

/// One stored candidate: the exact matrix in the text format, with the
/// exactly-computed margin of the targeted inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub iteration: u64,
    /// lhs/rhs of the targeted inequality; above 1 means violated.
    pub ratio: f64,
    pub violated: bool,
    pub margin: String,
    pub matrix: String,
}

/// Whole search state; serializes to a versioned JSON envelope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchState {
    pub format: String,
    pub version: u32,
    pub target: SearchTarget,
    pub sampler: SamplerConfig,
    pub seed: u64,
    pub iterations_done: u64,
    pub exact_evaluations: u64,
    pub violations_found: u64,
    pub inconclusive: u64,
    pub best: Vec<Candidate>,
}

enum ExactCandidate {
    Real(SquareMatrix<Rational>),
    Complex(SquareMatrix<GaussianRational>),
    Cyclotomic(SquareMatrix<CyclotomicNumber>),
}

impl ExactCandidate {
    fn render(&self) -> String {
        match self {
            ExactCandidate::Real(m) => render_matrix(m),
            ExactCandidate::Complex(m) => render_matrix(m),
            ExactCandidate::Cyclotomic(m) => render_matrix(m),
        }
    }

    fn embed(&self) -> DMatrix<Complex<f64>> {
        match self {
            ExactCandidate::Real(m) => embed_f64(m),
            ExactCandidate::Complex(m) => embed_f64(m),
            ExactCandidate::Cyclotomic(m) => embed_f64(m),
        }
    }

    fn exact_report(&self, target: SearchTarget) -> Result<ConjectureReport> {
        match self {
            ExactCandidate::Real(m) => exact_report(target, m),
            ExactCandidate::Complex(m) => exact_report(target, m),
            ExactCandidate::Cyclotomic(m) => exact_report(target, m),
        }
    }
}

struct PreResult {
    iteration: u64,
    candidate: ExactCandidate,
    text: String,
    /// `None` for pinned samplers, which always evaluate exactly.
    float_ratio: Option<f64>,
}

impl SearchState {
    pub fn new(target: &str, sampler: SamplerConfig, seed: u64) -> Result<SearchState> {
        let target = SearchTarget::parse(target)?;
        sampler.validate(target)?;
        Ok(SearchState {
            format: STATE_FORMAT.to_string(),
            version: STATE_VERSION,
            target,
            sampler,
            seed,
            iterations_done: 0,
            exact_evaluations: 0,
            violations_found: 0,
            inconclusive: 0,
            best: Vec::new(),
        })
    }

    pub fn run(&mut self, budget: u64) -> Result<()> {
        self.run_with_workers(budget, 1)
    }

    /// Workers split each batch's float prefilter; results merge at a single
    /// point in iteration order, so the outcome is independent of the count.
    pub fn run_with_workers(&mut self, budget: u64, workers: usize) -> Result<()> {
        let workers = workers.max(1);
        let end = self.iterations_done + budget;
        while self.iterations_done < end {
            let len = (end - self.iterations_done).min(BATCH as u64);
            let idxs: Vec<u64> = (self.iterations_done..self.iterations_done + len).collect();
            let pre = if workers == 1 {
                let mut v = Vec::with_capacity(idxs.len());
                for &i in &idxs {
                    v.push(self.prefilter(i)?);
                }
                v
            } else {
                let chunk = idxs.len().div_ceil(workers);
                let me = &*self;
                let results: Vec<Result<Vec<PreResult>>> = std::thread::scope(|scope| {
                    let handles: Vec<_> = idxs
                        .chunks(chunk)
                        .map(|c| {
                            scope.spawn(move || {
                                c.iter().map(|&i| me.prefilter(i)).collect::<Result<Vec<_>>>()
                            })
                        })
                        .collect();
                    handles
                        .into_iter()
                        .map(|h| h.join().expect("search worker panicked"))
                        .collect()
                });
                let mut v = Vec::with_capacity(idxs.len());
                for r in results {
                    v.extend(r?);
                }
                v
            };
            for p in pre {
                self.merge(p)?;
                self.iterations_done += 1;
            }
        }
        Ok(())
    }

    fn sample(&self, iteration: u64) -> Result<ExactCandidate> {
        if let Some(pin) = &self.sampler.pin {
            return Ok(match pin.as_str() {
                "shchesnovich" => ExactCandidate::Complex(builtin_shchesnovich().matrix),
                _ => ExactCandidate::Cyclotomic(builtin_drury().matrix),
            });
        }
        let mut rng = rng_for(self.seed, iteration);
        let cfg = &self.sampler;
        Ok(if cfg.complex {
            let g = correlation_gram(&mut rng, cfg.dimension, cfg.rank, cfg.bits);
            ExactCandidate::Complex(g.as_matrix().clone())
        } else {
            let g = real_correlation_gram(&mut rng, cfg.dimension, cfg.rank, cfg.bits);
            ExactCandidate::Real(g.as_matrix().clone())
        })
    }

    fn prefilter(&self, iteration: u64) -> Result<PreResult> {
        let candidate = self.sample(iteration)?;
        let text = candidate.render();
        let float_ratio = if self.sampler.pin.is_some() {
            None
        } else {
            Some(float_ratio(self.target, &candidate))
        };
        Ok(PreResult {
            iteration,
            candidate,
            text,
            float_ratio,
        })
    }

    fn merge(&mut self, p: PreResult) -> Result<()> {
        if self.best.iter().any(|c| c.matrix == p.text) {
            return Ok(());
        }
        let floor = if self.best.len() < TOP_K {
            f64::NEG_INFINITY
        } else {
            self.best[TOP_K - 1].ratio
        };
        let evaluate = match p.float_ratio {
            None => true,
            Some(fr) => fr > floor + BEAT_EPS || fr > violation_gate(self.target),
        };
        if !evaluate {
            return Ok(());
        }
        let report = p.candidate.exact_report(self.target)?;
        self.exact_evaluations += 1;
        match report.verdict {
            Verdict::Violated => self.violations_found += 1,
            Verdict::InconclusiveWithinError => self.inconclusive += 1,
            _ => {}
        }
        let ratio = safe_ratio(report.lhs.approx, report.rhs.approx);
        if !ratio.is_finite() {
            return Ok(());
        }
        self.best.push(Candidate {
            iteration: p.iteration,
            ratio,
            violated: report.verdict == Verdict::Violated,
            margin: report.margin.text.clone(),
            matrix: p.text,
        });
        self.best
            .sort_by(|a, b| b.ratio.total_cmp(&a.ratio).then(a.iteration.cmp(&b.iteration)));
        self.best.truncate(TOP_K);
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<SearchState> {
        let text = std::fs::read_to_string(path)?;
        let state: SearchState = serde_json::from_str(&text)?;
        if state.format != STATE_FORMAT {
            return Err(Error::State(format!(
                "not a search state file (format `{}`)",
                state.format
            )));
        }
        if state.version != STATE_VERSION {
            return Err(Error::State(format!(
                "state version {} unsupported (expected {STATE_VERSION})",
                state.version
            )));
        }
        state.sampler.validate(state.target)?;
        Ok(state)
    }
}

/// One-call form: fresh state, run, return.
pub fn search(target: &str, sampler: SamplerConfig, seed: u64, budget: u64) -> Result<SearchState> {
    let mut state = SearchState::new(target, sampler, seed)?;
    state.run(budget)?;
    Ok(state)
}

/// Independent RNG per iteration, keyed by seed and index alone.
fn rng_for(seed: u64, iteration: u64) -> ChaCha20Rng {
    let mut h = Sha256::new();
    h.update(b"permlab-search-v1");
    h.update(seed.to_le_bytes());
    h.update(iteration.to_le_bytes());
    rand::SeedableRng::from_seed(h.finalize().into())
}

fn violation_gate(target: SearchTarget) -> f64 {
    match target {
        // lambda_max(pi(A)) >= per A always, so non-violating samples sit
        // exactly at ratio 1; only a genuine excess is worth exact work
        SearchTarget::Pot => 1.0 + 1e-9,
        _ => 1.0 - 1e-6,
    }
}

fn safe_ratio(lhs: f64, rhs: f64) -> f64 {
    let r = lhs / rhs;
    if r.is_finite() {
        r
    } else {
        f64::NEG_INFINITY
    }
}

fn embed_f64<T: Scalar>(m: &SquareMatrix<T>) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(m.size(), m.size(), |i, j| {
        let e = m.at(i, j).embed(64);
        Complex::new(e.re_f64(), e.im_f64())
    })
}

fn exact_report<T: Scalar>(target: SearchTarget, a: &SquareMatrix<T>) -> Result<ConjectureReport> {
    match target {
        SearchTarget::Pot => pot_check(a),
        SearchTarget::BapatSunder => Ok(bapat_sunder(a, &a.conj_entries())?.swap_remove(0)),
        SearchTarget::Chollet => chollet(a, &a.conj_entries()),
    }
}

/// Float image of the targeted inequality's lhs/rhs ratio, mirroring the
/// exact checkers' orientation (above 1 means violated).
fn float_ratio(target: SearchTarget, candidate: &ExactCandidate) -> f64 {
    let m = candidate.embed();
    let n = m.nrows();
    let had_conj = DMatrix::from_fn(n, n, |i, j| Complex::new(m[(i, j)].norm_sqr(), 0.0));
    match target {
        SearchTarget::BapatSunder => {
            let lhs = per_f64(&had_conj).re;
            let mut rhs = per_f64(&m).re;
            for i in 0..n {
                rhs *= m[(i, i)].re;
            }
            safe_ratio(lhs, rhs)
        }
        SearchTarget::Chollet => {
            let lhs = per_f64(&had_conj).re;
            let pa = per_f64(&m);
            safe_ratio(lhs, pa.norm_sqr())
        }
        SearchTarget::Pot => {
            let per = per_f64(&m).re;
            // the all-ones Rayleigh quotient is per A, so the estimate
            // never undershoots it
            let lam = schur_lambda_max_f64(&m).max(per);
            safe_ratio(lam, per)
        }
    }
}

/// Power-iteration estimate of `lambda_max(pi(A))` on the dense float Schur
/// power, started from the all-ones vector (whose Rayleigh quotient is
/// `per A`).  Prefilter-grade: a lower estimate, not a certified bound.
fn schur_lambda_max_f64(m: &DMatrix<Complex<f64>>) -> f64 {
    let n = m.nrows();
    let perms: Vec<Permutation> = (0..factorial(n))
        .map(|r| Permutation::from_lex_rank(n, r).expect("rank below n!"))
        .collect();
    let d = perms.len();
    let pi = DMatrix::from_fn(d, d, |s, t| {
        let mut p = Complex::new(1.0, 0.0);
        for i in 0..n {
            p *= m[(perms[s].apply(i), perms[t].apply(i))];
        }
        p
    });
    let mut v = DVector::from_element(d, Complex::new(1.0, 0.0));
    let norm = v.norm();
    v = v.unscale(norm);
    let mut rayleigh = f64::NEG_INFINITY;
    for _ in 0..60 {
        let w = &pi * &v;
        let r = (v.adjoint() * &w)[(0, 0)].re;
        if (r - rayleigh).abs() <= 1e-12 * r.abs().max(1.0) {
            return r;
        }
        rayleigh = r;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w.unscale(norm);
    }
    rayleigh
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state_json(state: &SearchState) -> String {
        serde_json::to_string_pretty(state).unwrap()
    }

    #[test]
    fn unknown_targets_are_rejected() {
        let err = SearchState::new("perm-dominance", SamplerConfig::random(3, 2, true), 1)
            .unwrap_err();
        assert!(matches!(err, Error::UnknownChecker(_)), "{err}");
    }

    #[test]
    fn bad_sampler_configs_are_rejected() {
        assert!(SearchState::new("pot", SamplerConfig::random(1, 1, true), 1).is_err());
        assert!(SearchState::new("pot", SamplerConfig::random(3, 4, true), 1).is_err());
        assert!(SearchState::new("pot", SamplerConfig::random(6, 2, true), 1).is_err());
        assert!(SearchState::new("chollet", SamplerConfig::random(8, 2, true), 1).is_err());
        assert!(SearchState::new("pot", SamplerConfig::pinned("nonesuch"), 1).is_err());
    }

    #[test]
    fn pot_order_three_finds_no_violations() {
        let state = search("pot", SamplerConfig::random(3, 2, true), 7, 24).unwrap();
        assert_eq!(state.iterations_done, 24);
        assert_eq!(state.violations_found, 0);
        assert!(state.exact_evaluations >= 1);
        assert!(!state.best.is_empty());
        assert!(state.best.iter().all(|c| !c.violated));
        // non-violating samples sit at ratio 1 exactly (Rayleigh floor)
        assert!(state.best.iter().all(|c| c.ratio <= 1.0 + 1e-6));
    }

    #[test]
    fn chollet_order_two_finds_no_violations() {
        let state = search("chollet", SamplerConfig::random(2, 2, true), 11, 300).unwrap();
        assert_eq!(state.violations_found, 0);
        assert!(state.best.iter().all(|c| !c.violated && c.ratio <= 1.0));
    }

    #[test]
    fn pinned_drury_records_the_known_violation_once() {
        let mut state =
            SearchState::new("bapat-sunder", SamplerConfig::pinned("drury"), 3).unwrap();
        state.run(5).unwrap();
        assert_eq!(state.iterations_done, 5);
        // duplicates are skipped, so one exact evaluation covers all five
        assert_eq!(state.exact_evaluations, 1);
        assert_eq!(state.violations_found, 1);
        assert_eq!(state.best.len(), 1);
        let c = &state.best[0];
        assert!(c.violated);
        assert!((c.ratio - 1237.0 / 1152.0).abs() < 1e-9, "{}", c.ratio);
        assert_eq!(c.margin, "-425/128");
        assert!(c.matrix.starts_with("matrix 7 cyc40\n"));
    }

    #[test]
    fn identical_runs_are_byte_identical_and_worker_independent() {
        let cfg = SamplerConfig::random(3, 2, true);
        let a = search("bapat-sunder", cfg.clone(), 41, 40).unwrap();
        let b = search("bapat-sunder", cfg.clone(), 41, 40).unwrap();
        assert_eq!(state_json(&a), state_json(&b));

        let mut c = SearchState::new("bapat-sunder", cfg, 41).unwrap();
        c.run_with_workers(40, 3).unwrap();
        assert_eq!(state_json(&a), state_json(&c));
    }

    #[test]
    fn resume_equals_one_shot() {
        let cfg = SamplerConfig::random(3, 3, false);
        let oneshot = search("chollet", cfg.clone(), 5, 40).unwrap();

        let path = std::env::temp_dir().join(format!(
            "permlab-search-resume-{}.json",
            std::process::id()
        ));
        let mut first = SearchState::new("chollet", cfg, 5).unwrap();
        first.run(14).unwrap();
        first.save(&path).unwrap();
        let mut resumed = SearchState::load(&path).unwrap();
        resumed.run(26).unwrap();
        std::fs::remove_file(&path).ok();

        assert_eq!(state_json(&oneshot), state_json(&resumed));
    }

    #[test]
    fn corrupt_state_files_are_rejected() {
        let dir = std::env::temp_dir();
        let garbled = dir.join(format!("permlab-garbled-{}.json", std::process::id()));
        std::fs::write(&garbled, "{ not json").unwrap();
        assert!(matches!(
            SearchState::load(&garbled),
            Err(Error::Json(_))
        ));
        std::fs::write(
            &garbled,
            serde_json::to_string(&serde_json::json!({
                "format": "something-else", "version": 1, "target": "pot",
                "sampler": SamplerConfig::random(3, 2, true), "seed": 0,
                "iterations_done": 0, "exact_evaluations": 0,
                "violations_found": 0, "inconclusive": 0, "best": []
            }))
            .unwrap(),
        )
        .unwrap();
        assert!(matches!(SearchState::load(&garbled), Err(Error::State(_))));
        std::fs::remove_file(&garbled).ok();
    }

    #[test]
    fn zero_budget_is_a_no_op() {
        let mut state = SearchState::new("pot", SamplerConfig::random(3, 2, true), 9).unwrap();
        state.run(0).unwrap();
        assert_eq!(state.iterations_done, 0);
        assert!(state.best.is_empty());
    }
}
