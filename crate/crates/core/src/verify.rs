//! Verification suites: one record per trial, deterministic per seed.
//!
//! Every trial draws from its own ChaCha stream, keyed by the seed, the
//! suite's registry index and the trial index, so records are identical
//! whether trials run sequentially or in parallel.

use std::f64::consts::PI;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::dedekind::reciprocity_defect;
use crate::error::{Error, Result};
use crate::exact::{Rational, UnitPhase};
use crate::exec::Exec;
use crate::modular::Sl2Matrix;
use crate::multipliers::{
    lemma1_check, lemma2_check, lemma3_check, lemma4_check, lemma4_observed_factor, theta1_epsilon,
    theta1_epsilon_closed_phase, LemmaOutcome,
};
use crate::theta::{theta_series_capped, LatticePoint, ThetaKind, TERM_CAP};
use crate::transform::{chain_theta1, kappa, law_residual, predict_theta1, TransformLaw};
use crate::Complex;

const I: Complex = Complex::new(0.0, 1.0);

/// Longest random generator word.
pub const MAX_WORD_LEN: usize = 12;

const MAX_RESAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteClass {
    /// Decided by exact equality.
    Exact,
    /// Decided by `residual < tol·κ`.
    Numeric,
    /// Reported, never fails a run.
    Diagnostic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Suite {
    pub name: &'static str,
    pub class: SuiteClass,
    pub about: &'static str,
}

pub const SUITES: &[Suite] = &[
    Suite { name: "lemma1", class: SuiteClass::Exact, about: "ε₁(AT^m) = ε₁(A) e^{πim/4}" },
    Suite { name: "lemma2", class: SuiteClass::Exact, about: "ε₁(AS) = e^{∓3πi/4} ε₁(A), both signs of d" },
    Suite { name: "lemma3", class: SuiteClass::Exact, about: "ε₁(AT^{2m}) = ε₁(A) e^{πim/2} on Γ(2)" },
    Suite { name: "lemma4", class: SuiteClass::Exact, about: "ε₁(AS₂) against ε₁(A), both signs of c+2d" },
    Suite { name: "lemma5", class: SuiteClass::Numeric, about: "θ₃ under S₂ = (1 0; 2 1)" },
    Suite { name: "eq1", class: SuiteClass::Numeric, about: "θ₁(z, τ+m) = e^{πim/4} θ₁(z, τ)" },
    Suite { name: "eq2", class: SuiteClass::Numeric, about: "θ₁(z/τ, −1/τ) = −i(−iτ)^{1/2} e^{πiz²/τ} θ₁(z, τ)" },
    Suite { name: "theorem1", class: SuiteClass::Numeric, about: "θ₁ law on random A with c > 0" },
    Suite { name: "theorem2-theta2", class: SuiteClass::Numeric, about: "θ₂ law on random Γ(2) matrices" },
    Suite { name: "theorem2-theta3", class: SuiteClass::Numeric, about: "θ₃ law on random Γ(2) matrices" },
    Suite { name: "theorem2-theta4", class: SuiteClass::Numeric, about: "θ₄ law on random Γ(2) matrices" },
    Suite { name: "reciprocity", class: SuiteClass::Exact, about: "Dedekind reciprocity on all coprime pairs ≤ entry bound" },
    Suite { name: "closed-form-epsilon", class: SuiteClass::Diagnostic, about: "Jacobi-symbol form of ε₁ against −iε³" },
    Suite { name: "chain-vs-direct", class: SuiteClass::Numeric, about: "letter-by-letter θ₁ law against single shot" },
    Suite { name: "parity-mod4", class: SuiteClass::Exact, about: "(c+1)² − a² ≡ 0 and d² − b² ≡ 1 (mod 4) on Γ(2)" },
];

pub fn suite(name: &str) -> Result<(usize, &'static Suite)> {
    SUITES
        .iter()
        .enumerate()
        .find(|(_, s)| s.name == name)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))
}

/// A rectangle `[re_min, re_max] × [im_min, im_max]` in ℂ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Region { re_min, re_max, im_min, im_max }
    }

    fn is_valid(&self) -> bool {
        [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|x| x.is_finite())
            && self.re_min <= self.re_max
            && self.im_min <= self.im_max
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Complex {
        Complex::new(rng.random_range(self.re_min..=self.re_max), rng.random_range(self.im_min..=self.im_max))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    pub entry_bound: i64,
    pub tau_box: Region,
    pub z_box: Region,
    pub tol: f64,
    pub suites: Vec<String>,
    /// Matrices replacing the random draws, one per trial.
    #[serde(skip)]
    pub corpus: Option<Vec<Sl2Matrix>>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            seed: 0,
            trials: 100,
            entry_bound: 20,
            tau_box: Region::new(-1.0, 1.0, 0.5, 2.0),
            z_box: Region::new(-0.5, 0.5, -0.5, 0.5),
            tol: 1e-9,
            suites: SUITES.iter().map(|s| s.name.to_string()).collect(),
            corpus: None,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::domain("trials must be at least 1"));
        }
        if self.entry_bound < 2 {
            return Err(Error::domain("entry bound must be at least 2"));
        }
        if !self.tau_box.is_valid() || self.tau_box.im_min <= 0.0 {
            return Err(Error::domain("tau box must be a finite box with im_min > 0"));
        }
        if !self.z_box.is_valid() {
            return Err(Error::domain("z box must be a finite box"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.suites.is_empty() {
            return Err(Error::domain("no suites selected"));
        }
        for name in &self.suites {
            suite(name)?;
        }
        if matches!(&self.corpus, Some(c) if c.is_empty()) {
            return Err(Error::domain("corpus is empty"));
        }
        Ok(())
    }

    /// Series tolerance for each side of a numeric comparison.
    fn series_tol(&self) -> f64 {
        (self.tol * 1e-3).max(1e-15)
    }
}

/// Reads a corpus: one `[[a,b],[c,d]]` per line, blank lines and `#` comments ignored.
pub fn parse_corpus(text: &str) -> Result<Vec<Sl2Matrix>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.trim().parse::<Sl2Matrix>().map_err(|e| match e {
                Error::Parse(msg) => Error::Parse(format!("line {}: {msg}", i + 1)),
                other => other,
            })
        })
        .collect()
}

/// Replay information for one trial.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Sl2Matrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<ThetaKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Complex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<Complex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
}

/// A compared quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Complex(Complex),
    Phase { phase: UnitPhase },
    Rational { rational: Rational },
    Residues { mod4: Vec<i64> },
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Residual {
    Exact,
    Value(f64),
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Residual::Exact => serializer.serialize_str("exact"),
            Residual::Value(v) => serializer.serialize_f64(*v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The tolerance could not be reached within the term cap.
    Inconclusive,
    /// A corpus matrix outside the suite's domain.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub suite: String,
    pub trial: usize,
    pub inputs: Inputs,
    pub expected: Quantity,
    pub observed: Quantity,
    pub residual: Residual,
    pub pass: bool,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationRecord {
    fn exact(suite: &str, trial: usize, inputs: Inputs, expected: Quantity, observed: Quantity) -> Self {
        let pass = expected == observed;
        VerificationRecord {
            suite: suite.to_string(),
            trial,
            inputs,
            expected,
            observed,
            residual: Residual::Exact,
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            kappa: None,
            note: None,
        }
    }

    fn numeric(suite: &str, trial: usize, inputs: Inputs, expected: Complex, observed: Complex, kappa: f64, tol: f64) -> Self {
        let residual = (expected - observed).norm();
        let pass = residual < tol * kappa;
        VerificationRecord {
            suite: suite.to_string(),
            trial,
            inputs,
            expected: Quantity::Complex(expected),
            observed: Quantity::Complex(observed),
            residual: Residual::Value(residual),
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            kappa: Some(kappa),
            note: None,
        }
    }

    fn from_error(suite: &str, trial: usize, inputs: Inputs, err: Error) -> Self {
        let status = match err {
            Error::PrecisionUnreachable { .. } => Status::Inconclusive,
            Error::Domain(_) | Error::NotGamma2(_) => Status::Skipped,
            _ => Status::Fail,
        };
        VerificationRecord {
            suite: suite.to_string(),
            trial,
            inputs,
            expected: Quantity::None,
            observed: Quantity::None,
            residual: Residual::Exact,
            pass: false,
            status,
            kappa: None,
            note: Some(err.to_string()),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Per-suite tallies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub class: SuiteClass,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub skipped: usize,
}

impl SuiteSummary {
    pub fn from_records(name: &str, records: &[VerificationRecord]) -> Result<Self> {
        let (_, info) = suite(name)?;
        let count = |s: Status| records.iter().filter(|r| r.status == s).count();
        Ok(SuiteSummary {
            suite: name.to_string(),
            class: info.class,
            trials: records.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            inconclusive: count(Status::Inconclusive),
            skipped: count(Status::Skipped),
        })
    }

    /// Whether the suite counts as passing for the exit code.
    pub fn ok(&self) -> bool {
        self.class == SuiteClass::Diagnostic || (self.failed == 0 && self.inconclusive == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub summary: Vec<SuiteSummary>,
    pub seed: u64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
}

impl Report {
    /// JSON Lines: every record, then the summary.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut out, &self.summary)?;
        out.write_all(b"\n")
    }
}

/// Runs every configured suite in registry order of the config list.
pub fn run(config: &TrialConfig, exec: Exec) -> Result<Report> {
    config.validate()?;
    let mut records = Vec::new();
    let mut summary = Vec::new();
    for name in &config.suites {
        let rs = run_suite(name, config, exec)?;
        summary.push(SuiteSummary::from_records(name, &rs)?);
        records.extend(rs);
    }
    let pass = summary.iter().all(SuiteSummary::ok);
    Ok(Report {
        records,
        summary: Summary { summary, seed: config.seed, tol: config.tol, pass },
    })
}

/// All trial records of one suite, in trial order.
pub fn run_suite(name: &str, config: &TrialConfig, exec: Exec) -> Result<Vec<VerificationRecord>> {
    let (index, info) = suite(name)?;
    config.validate()?;
    if info.name == "reciprocity" {
        let pairs = coprime_pairs(config.entry_bound);
        return Ok(exec.map_slice(&pairs, |t, &(h, k)| reciprocity_trial(info.name, t, h, k)));
    }
    let trials = config.corpus.as_ref().map_or(config.trials, Vec::len);
    let ctx = Ctx { config, index, name: info.name };
    Ok(exec.map(trials, |t| ctx.trial(t)))
}

/// Coprime pairs `1 ≤ h, k ≤ bound`, `h` outer.
pub fn coprime_pairs(bound: i64) -> Vec<(i64, i64)> {
    (1..=bound)
        .flat_map(|h| (1..=bound).map(move |k| (h, k)))
        .filter(|&(h, k)| h.gcd(&k) == 1)
        .collect()
}

fn reciprocity_trial(name: &str, trial: usize, h: i64, k: i64) -> VerificationRecord {
    let inputs = Inputs { h: Some(h), k: Some(k), ..Inputs::default() };
    match reciprocity_defect(&BigInt::from(h), &BigInt::from(k)) {
        Ok(defect) => VerificationRecord::exact(
            name,
            trial,
            inputs,
            Quantity::Rational { rational: Rational::zero() },
            Quantity::Rational { rational: defect },
        ),
        Err(e) => VerificationRecord::from_error(name, trial, inputs, e),
    }
}

fn trial_rng(seed: u64, suite_index: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((suite_index as u64) << 32) | trial as u64);
    rng
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let k = rng.random_range(1..=bound.max(1));
    if rng.random_bool(0.5) {
        k
    } else {
        -k
    }
}

/// A product of at most `MAX_WORD_LEN` random generator powers, skipping any
/// letter that would push an entry past `bound`.
pub fn random_word_matrix(rng: &mut ChaCha8Rng, gamma2: bool, bound: i64) -> Sl2Matrix {
    let len = rng.random_range(1..=MAX_WORD_LEN);
    let limit = BigInt::from(bound);
    let mut acc = Sl2Matrix::identity();
    for _ in 0..len {
        let letter = match (gamma2, rng.random_bool(0.5)) {
            (false, true) => Sl2Matrix::s(),
            (false, false) => Sl2Matrix::t(nonzero(rng, bound)),
            (true, true) => Sl2Matrix::t2(nonzero(rng, bound / 2)),
            (true, false) => Sl2Matrix::s2(nonzero(rng, bound / 2)),
        };
        let next = &acc * &letter;
        if next.max_abs_entry() <= limit {
            acc = next;
        }
    }
    acc
}

/// Draws word matrices until `accept` holds; returns it sign-normalized.
pub fn sample_matrix(
    rng: &mut ChaCha8Rng,
    gamma2: bool,
    bound: i64,
    accept: impl Fn(&Sl2Matrix) -> bool,
) -> Result<Sl2Matrix> {
    for _ in 0..MAX_RESAMPLES {
        let (m, _) = random_word_matrix(rng, gamma2, bound).normalize_sign();
        if accept(&m) {
            return Ok(m);
        }
    }
    Err(Error::Internal(format!("no acceptable matrix with entries ≤ {bound}")))
}

struct Ctx<'a> {
    config: &'a TrialConfig,
    index: usize,
    name: &'static str,
}

impl Ctx<'_> {
    fn trial(&self, t: usize) -> VerificationRecord {
        let mut rng = trial_rng(self.config.seed, self.index, t);
        let mut inputs = Inputs::default();
        match self.run(t, &mut rng, &mut inputs) {
            Ok(r) => r,
            Err(e) => VerificationRecord::from_error(self.name, t, inputs, e),
        }
    }

    /// The trial's matrix: the corpus entry if there is one, else a word draw.
    fn matrix(&self, t: usize, rng: &mut ChaCha8Rng, gamma2: bool, accept: impl Fn(&Sl2Matrix) -> bool) -> Result<Sl2Matrix> {
        match &self.config.corpus {
            Some(corpus) => {
                let (m, _) = corpus[t].normalize_sign();
                if (gamma2 && !m.is_gamma2()) || !accept(&m) {
                    return Err(Error::domain(format!("corpus matrix {m} is outside this suite's domain")));
                }
                Ok(m)
            }
            None => sample_matrix(rng, gamma2, self.config.entry_bound, accept),
        }
    }

    fn point(&self, rng: &mut ChaCha8Rng, inputs: &mut Inputs) -> (Complex, Complex) {
        let z = self.config.z_box.sample(rng);
        let tau = self.config.tau_box.sample(rng);
        inputs.z = Some(z);
        inputs.tau = Some(tau);
        (z, tau)
    }

    fn lemma_record(&self, t: usize, inputs: Inputs, out: LemmaOutcome) -> VerificationRecord {
        VerificationRecord::exact(
            self.name,
            t,
            inputs,
            Quantity::Phase { phase: out.rhs },
            Quantity::Phase { phase: out.lhs },
        )
    }

    fn run(&self, t: usize, rng: &mut ChaCha8Rng, inputs: &mut Inputs) -> Result<VerificationRecord> {
        let tol = self.config.tol;
        let stol = self.config.series_tol();
        let c_positive = |m: &Sl2Matrix| m.c().is_positive();
        match self.name {
            "lemma1" => {
                let a = self.matrix(t, rng, false, c_positive)?;
                let m = rng.random_range(-10..=10);
                inputs.matrix = Some(a.clone());
                inputs.m = Some(m);
                Ok(self.lemma_record(t, inputs.clone(), lemma1_check(&a, m)?))
            }
            "lemma2" => {
                // Alternate the two branches: even trials d > 0, odd trials d < 0.
                let want_positive = t % 2 == 0;
                let a = self.matrix(t, rng, false, |m| {
                    m.c().is_positive() && !m.d().is_zero() && (self.config.corpus.is_some() || m.d().is_positive() == want_positive)
                })?;
                inputs.matrix = Some(a.clone());
                let branch = if a.d().is_positive() { "d > 0" } else { "d < 0" };
                Ok(self.lemma_record(t, inputs.clone(), lemma2_check(&a)?).with_note(branch))
            }
            "lemma3" => {
                let a = self.matrix(t, rng, true, c_positive)?;
                let m = rng.random_range(-10..=10);
                inputs.matrix = Some(a.clone());
                inputs.m = Some(m);
                Ok(self.lemma_record(t, inputs.clone(), lemma3_check(&a, m)?))
            }
            "lemma4" => {
                let want_positive = t % 2 == 0;
                let a = self.matrix(t, rng, true, |m| {
                    let s = m.c() + m.d() * 2u32;
                    m.c().is_positive() && !s.is_zero() && (self.config.corpus.is_some() || s.is_positive() == want_positive)
                })?;
                inputs.matrix = Some(a.clone());
                let branch = if (a.c() + a.d() * 2u32).is_positive() { "c + 2d > 0" } else { "c + 2d < 0" };
                let factor = lemma4_observed_factor(&a)?;
                let note = format!("{branch}; observed factor e^(πi·{})", factor.phase());
                Ok(self.lemma_record(t, inputs.clone(), lemma4_check(&a)?).with_note(note))
            }
            "lemma5" => {
                let (z, tau) = self.point(rng, inputs);
                let w = 2.0 * tau + 1.0;
                let lhs = series(ThetaKind::Theta3, z / w, tau / w, stol)?;
                // i · e^{−πi/2} = 1
                let rhs = I * (-I) * w.sqrt() * (2.0 * PI * I * z * z / w).exp() * series(ThetaKind::Theta3, z, tau, stol)?;
                Ok(VerificationRecord::numeric(self.name, t, inputs.clone(), lhs, rhs, 1.0, tol))
            }
            "eq1" => {
                let (z, tau) = self.point(rng, inputs);
                let m = rng.random_range(-self.config.entry_bound..=self.config.entry_bound);
                inputs.m = Some(m);
                let lhs = series(ThetaKind::Theta1, z, tau + m as f64, stol)?;
                let rhs = (I * PI * m as f64 / 4.0).exp() * series(ThetaKind::Theta1, z, tau, stol)?;
                let k = kappa(&Sl2Matrix::t(m), z, tau);
                Ok(VerificationRecord::numeric(self.name, t, inputs.clone(), lhs, rhs, k, tol))
            }
            "eq2" => {
                let (z, tau) = self.point(rng, inputs);
                let lhs = series(ThetaKind::Theta1, z / tau, -1.0 / tau, stol)?;
                let rhs = -I * (-I * tau).sqrt() * (I * PI * z * z / tau).exp() * series(ThetaKind::Theta1, z, tau, stol)?;
                let k = kappa(&Sl2Matrix::s(), z, tau);
                Ok(VerificationRecord::numeric(self.name, t, inputs.clone(), lhs, rhs, k, tol))
            }
            "theorem1" => {
                let a = self.matrix(t, rng, false, c_positive)?;
                inputs.matrix = Some(a.clone());
                let (z, tau) = self.point(rng, inputs);
                self.law_record(t, inputs, &TransformLaw::theta1(&a)?, z, tau)
            }
            "theorem2-theta2" | "theorem2-theta3" | "theorem2-theta4" => {
                let kind = match self.name {
                    "theorem2-theta2" => ThetaKind::Theta2,
                    "theorem2-theta3" => ThetaKind::Theta3,
                    _ => ThetaKind::Theta4,
                };
                let a = self.matrix(t, rng, true, c_positive)?;
                inputs.matrix = Some(a.clone());
                inputs.kind = Some(kind);
                let (z, tau) = self.point(rng, inputs);
                self.law_record(t, inputs, &TransformLaw::gamma2(kind, &a)?, z, tau)
            }
            "closed-form-epsilon" => {
                let a = self.matrix(t, rng, false, c_positive)?;
                inputs.matrix = Some(a.clone());
                let expected = theta1_epsilon(&a)?.value;
                let observed = theta1_epsilon_closed_phase(&a)?;
                let branch = if a.c().is_odd() { "c odd" } else { "d odd" };
                Ok(VerificationRecord::exact(
                    self.name,
                    t,
                    inputs.clone(),
                    Quantity::Phase { phase: expected },
                    Quantity::Phase { phase: observed },
                )
                .with_note(branch))
            }
            "chain-vs-direct" => {
                let a = self.matrix(t, rng, false, c_positive)?;
                inputs.matrix = Some(a.clone());
                let (z, tau) = self.point(rng, inputs);
                let single = predict_theta1(&a, z, tau, stol)?.value;
                let chained = chain_theta1(&a, z, tau, stol)?;
                let scale = single.norm().max(1.0);
                Ok(VerificationRecord::numeric(self.name, t, inputs.clone(), single, chained, scale, tol))
            }
            "parity-mod4" => {
                let a = self.matrix(t, rng, true, |_| true)?;
                inputs.matrix = Some(a.clone());
                let four = BigInt::from(4);
                let r1 = ((a.c() + BigInt::one()).pow(2) - a.a().pow(2)).mod_floor(&four);
                let r2 = (a.d().pow(2) - a.b().pow(2)).mod_floor(&four);
                let residues = [r1, r2].map(|r| r.to_i64().expect("residue mod 4"));
                Ok(VerificationRecord::exact(
                    self.name,
                    t,
                    inputs.clone(),
                    Quantity::Residues { mod4: vec![0, 1] },
                    Quantity::Residues { mod4: residues.to_vec() },
                ))
            }
            other => Err(Error::UnknownSuite(other.to_string())),
        }
    }

    fn law_record(&self, t: usize, inputs: &Inputs, law: &TransformLaw, z: Complex, tau: Complex) -> Result<VerificationRecord> {
        let (lhs, rhs, _) = law_residual(law, z, tau, self.config.series_tol())?;
        Ok(VerificationRecord::numeric(self.name, t, inputs.clone(), lhs, rhs.value, rhs.kappa, self.config.tol))
    }
}

fn series(kind: ThetaKind, z: Complex, tau: Complex, tol: f64) -> Result<Complex> {
    Ok(theta_series_capped(kind, &LatticePoint::new(z, tau)?, tol, TERM_CAP)?.value)
}
