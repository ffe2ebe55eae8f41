//! Hybrid training loop.
//!
//! Each step presents a random input `i`, measures `M = Ô(i, w)` on the circuit
//! with the current weight, and compares it with the analytic expectation
//! `E = O(i, w_t)` for the target. A mismatch triggers one of three updates:
//!
//! * case 1: exactly one of `M`, `E` is (within tolerance) zero. A random digit
//!   of `w` is incremented, drawn from the digits orthogonal to `i` when there
//!   are any (the only ones that can make `M` vanish) and from all digits
//!   otherwise.
//! * case 2: `M > E`. A random digit where `w` equals `i` is incremented.
//! * case 3: `M < E`. A random digit where `w` differs from `i` is copied from
//!   `i`.
//!
//! Increments wrap modulo `m`. When case 2 or 3 finds no eligible digit it
//! falls back to case 1. Training stops after `cycle_length` consecutive
//! matches or at `max_steps`.
//!
//! Step records carry the weight *after* the update and its fidelity
//! `|⟨w_t|w⟩|²`.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::encoding::{AlphabetSize, PatternCode};
use crate::error::{Error, Result};
use crate::perceptron::PerceptronCircuit;
use crate::sepsim::{sample_ancilla, stream_rng, SimRng};

pub const DEFAULT_SHOTS: u32 = 1024;
pub const DEFAULT_TOLERANCE_FLOOR: f64 = 0.02;
pub const DEFAULT_Z_SIGMA: f64 = 3.0;
pub const DEFAULT_MAX_STEPS: usize = 10_000;
const MAX_DEFAULT_CYCLE: u64 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingConfig {
    pub target: PatternCode,
    pub shots: u32,
    /// Use the exact match probability instead of a shot estimate.
    pub exact_measurement: bool,
    pub tolerance_floor: f64,
    pub z_sigma: f64,
    pub cycle_length: usize,
    pub max_steps: usize,
    pub seed: u64,
    /// Record a shot-estimated fidelity with this many shots instead of the
    /// analytic value.
    pub fidelity_shots: Option<u32>,
    /// Start from this weight instead of a random one.
    pub initial_weight: Option<PatternCode>,
}

impl TrainingConfig {
    pub fn new(target: PatternCode) -> Self {
        let cycle_length = default_cycle_length(target.alphabet(), target.len());
        TrainingConfig {
            target,
            shots: DEFAULT_SHOTS,
            exact_measurement: false,
            tolerance_floor: DEFAULT_TOLERANCE_FLOOR,
            z_sigma: DEFAULT_Z_SIGMA,
            cycle_length,
            max_steps: DEFAULT_MAX_STEPS,
            seed: 0,
            fidelity_shots: None,
            initial_weight: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.shots == 0 {
            return bad("shots must be at least 1");
        }
        if !self.tolerance_floor.is_finite() || self.tolerance_floor <= 0.0 {
            return bad("tolerance floor must be positive");
        }
        if !self.z_sigma.is_finite() || self.z_sigma <= 0.0 {
            return bad("z_sigma must be positive");
        }
        if self.cycle_length == 0 {
            return bad("cycle length must be at least 1");
        }
        if self.max_steps == 0 {
            return bad("max_steps must be at least 1");
        }
        if self.fidelity_shots == Some(0) {
            return bad("fidelity shots must be at least 1");
        }
        if let Some(w) = &self.initial_weight {
            w.check_compatible(&self.target)?;
        }
        Ok(())
    }

    /// Shot count used for the acceptance band, `None` in exact mode.
    fn measurement_shots(&self) -> Option<u32> {
        (!self.exact_measurement).then_some(self.shots)
    }
}

/// `min(m^n, 64)`.
pub fn default_cycle_length(m: AlphabetSize, n: usize) -> usize {
    let mut total = 1u64;
    for _ in 0..n {
        total = total.saturating_mul(m.get() as u64);
        if total >= MAX_DEFAULT_CYCLE {
            return MAX_DEFAULT_CYCLE as usize;
        }
    }
    total as usize
}

/// Kind of weight update triggered by a misclassification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mismatch {
    /// One side is zero and the other is not.
    #[serde(rename = "case1")]
    Orthogonality,
    /// Measured overlap above the expected one.
    #[serde(rename = "case2")]
    TooHigh,
    /// Measured overlap below the expected one.
    #[serde(rename = "case3")]
    TooLow,
}

impl Mismatch {
    pub fn label(self) -> &'static str {
        match self {
            Mismatch::Orthogonality => "case1",
            Mismatch::TooHigh => "case2",
            Mismatch::TooLow => "case3",
        }
    }
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Label for an optional mismatch; `"none"` when the step matched.
pub fn case_label(case: Option<Mismatch>) -> &'static str {
    case.map_or("none", Mismatch::label)
}

fn overlap(a: &PatternCode, b: &PatternCode) -> Result<f64> {
    a.check_compatible(b)?;
    let m = a.alphabet().get() as f64;
    Ok(a.digits()
        .iter()
        .zip(b.digits())
        .map(|(&x, &y)| {
            let c = ((x as f64 - y as f64) * PI / m).cos();
            c * c
        })
        .product())
}

/// Analytic `O(i, w_t) = ∏ cos²((t_k - i_k)π/m)`.
pub fn expected_output(input: &PatternCode, target: &PatternCode) -> Result<f64> {
    overlap(input, target)
}

/// `|⟨w_t|w⟩|²`, computed analytically.
pub fn fidelity(weight: &PatternCode, target: &PatternCode) -> Result<f64> {
    overlap(weight, target)
}

/// Acceptance band: `max(floor, z·sqrt(M(1-M)/shots))`, or just the floor when
/// `shots` is `None`.
pub fn tolerance(measured: f64, shots: Option<u32>, floor: f64, z_sigma: f64) -> f64 {
    match shots {
        Some(s) => {
            let var = (measured * (1.0 - measured)).max(0.0) / s as f64;
            floor.max(z_sigma * var.sqrt())
        }
        None => floor,
    }
}

/// `None` when the measurement agrees with the expectation.
pub fn classify_mismatch(
    measured: f64,
    expected: f64,
    shots: Option<u32>,
    cfg: &TrainingConfig,
) -> Option<Mismatch> {
    let tau = tolerance(measured, shots, cfg.tolerance_floor, cfg.z_sigma);
    if (measured - expected).abs() <= tau {
        None
    } else if (expected <= tau) != (measured <= tau) {
        Some(Mismatch::Orthogonality)
    } else if measured > expected {
        Some(Mismatch::TooHigh)
    } else {
        Some(Mismatch::TooLow)
    }
}

fn pick<R: Rng + ?Sized>(candidates: &[usize], rng: &mut R) -> usize {
    candidates[rng.random_range(0..candidates.len())]
}

/// Changes exactly one digit of `weight` according to `case`.
pub fn apply_update<R: Rng + ?Sized>(
    weight: &PatternCode,
    input: &PatternCode,
    case: Mismatch,
    rng: &mut R,
) -> PatternCode {
    let m = weight.alphabet().get();
    let w = weight.digits();
    let i = input.digits();
    let mut out = weight.clone();
    let increment = |out: &mut PatternCode, k: usize| {
        out.set_digit(k, (w[k] + 1) % m)
            .expect("digit stays below m");
    };
    let all: Vec<usize> = (0..w.len()).collect();

    match case {
        Mismatch::Orthogonality => {
            // a zero reading comes from a pair with w_k ⟂ i_k
            let orthogonal: Vec<usize> = all
                .iter()
                .copied()
                .filter(|&k| (w[k] + m - i[k]) % m == m / 2)
                .collect();
            let pool = if orthogonal.is_empty() {
                &all
            } else {
                &orthogonal
            };
            increment(&mut out, pick(pool, rng));
        }
        Mismatch::TooHigh => {
            let equal: Vec<usize> = all.iter().copied().filter(|&k| w[k] == i[k]).collect();
            let pool = if equal.is_empty() { &all } else { &equal };
            increment(&mut out, pick(pool, rng));
        }
        Mismatch::TooLow => {
            let differ: Vec<usize> = all.iter().copied().filter(|&k| w[k] != i[k]).collect();
            if differ.is_empty() {
                increment(&mut out, pick(&all, rng));
            } else {
                let k = pick(&differ, rng);
                out.set_digit(k, i[k]).expect("input digit is in range");
            }
        }
    }
    out
}

fn random_code<R: Rng + ?Sized>(like: &PatternCode, rng: &mut R) -> PatternCode {
    let m = like.alphabet();
    let digits = (0..like.len())
        .map(|_| rng.random_range(0..m.get()))
        .collect();
    PatternCode::new(digits, m).expect("random digits are in range")
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingStep {
    pub step: usize,
    pub input: PatternCode,
    pub weight_before: PatternCode,
    pub measured: f64,
    pub expected: f64,
    pub case_applied: Option<Mismatch>,
    pub weight_after: PatternCode,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingTrace {
    pub initial_weight: PatternCode,
    pub initial_fidelity: f64,
    pub steps: Vec<TrainingStep>,
    pub converged: bool,
    pub total_steps: usize,
}

impl TrainingTrace {
    pub fn final_weight(&self) -> &PatternCode {
        self.steps
            .last()
            .map_or(&self.initial_weight, |s| &s.weight_after)
    }

    pub fn final_fidelity(&self) -> f64 {
        self.steps
            .last()
            .map_or(self.initial_fidelity, |s| s.fidelity)
    }

    /// Fidelity before the first step followed by the fidelity after each step.
    pub fn fidelity_curve(&self) -> Vec<f64> {
        std::iter::once(self.initial_fidelity)
            .chain(self.steps.iter().map(|s| s.fidelity))
            .collect()
    }
}

/// One session on stream 0 of `cfg.seed`.
pub fn run_session(cfg: &TrainingConfig) -> Result<TrainingTrace> {
    cfg.validate()?;
    run_with_rng(cfg, &mut stream_rng(cfg.seed, 0))
}

fn record_fidelity(cfg: &TrainingConfig, weight: &PatternCode, rng: &mut SimRng) -> Result<f64> {
    let f = fidelity(weight, &cfg.target)?;
    match cfg.fidelity_shots {
        Some(shots) => Ok(sample_ancilla(f, shots, rng)?.estimate()),
        None => Ok(f),
    }
}

fn run_with_rng(cfg: &TrainingConfig, rng: &mut SimRng) -> Result<TrainingTrace> {
    let initial_weight = match &cfg.initial_weight {
        Some(w) => w.clone(),
        None => random_code(&cfg.target, rng),
    };
    let initial_fidelity = record_fidelity(cfg, &initial_weight, rng)?;
    let shots = cfg.measurement_shots();

    let mut weight = initial_weight.clone();
    let mut steps = Vec::new();
    let mut clean_run = 0usize;
    let mut converged = false;

    for step in 1..=cfg.max_steps {
        let input = random_code(&cfg.target, rng);
        let circuit = PerceptronCircuit::new(input.clone(), weight.clone())?;
        let measured = match shots {
            Some(s) => circuit.estimate_match(s, rng)?.value(),
            None => circuit.exact_match_probability(),
        };
        let expected = expected_output(&input, &cfg.target)?;
        let case_applied = classify_mismatch(measured, expected, shots, cfg);
        let weight_after = match case_applied {
            Some(case) => apply_update(&weight, &input, case, rng),
            None => weight.clone(),
        };
        let fidelity = record_fidelity(cfg, &weight_after, rng)?;

        steps.push(TrainingStep {
            step,
            input,
            weight_before: std::mem::replace(&mut weight, weight_after.clone()),
            measured,
            expected,
            case_applied,
            weight_after,
            fidelity,
        });

        clean_run = if case_applied.is_none() {
            clean_run + 1
        } else {
            0
        };
        if clean_run >= cfg.cycle_length {
            converged = true;
            break;
        }
    }

    let total_steps = steps.len();
    Ok(TrainingTrace {
        initial_weight,
        initial_fidelity,
        steps,
        converged,
        total_steps,
    })
}

/// Independent sessions; session `k` draws from stream `k` of `cfg.seed`.
/// Results are in session order regardless of scheduling.
pub fn run_sessions(cfg: &TrainingConfig, sessions: usize) -> Result<Vec<TrainingTrace>> {
    cfg.validate()?;
    (0..sessions as u64)
        .into_par_iter()
        .map(|k| run_with_rng(cfg, &mut stream_rng(cfg.seed, k)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub sessions: usize,
    pub convergence_rate: f64,
    pub mean_steps: f64,
    pub median_steps: f64,
    pub max_steps_observed: usize,
    /// Mean fidelity per step, index 0 being the initial weights. Converged
    /// sessions count as 1.0 past their last step.
    pub mean_fidelity_curve: Vec<f64>,
}

pub fn summarize(traces: &[TrainingTrace]) -> BatchSummary {
    let sessions = traces.len();
    if sessions == 0 {
        return BatchSummary {
            sessions,
            convergence_rate: 0.0,
            mean_steps: 0.0,
            median_steps: 0.0,
            max_steps_observed: 0,
            mean_fidelity_curve: Vec::new(),
        };
    }
    let mut counts: Vec<usize> = traces.iter().map(|t| t.total_steps).collect();
    counts.sort_unstable();
    let mid = sessions / 2;
    let median_steps = if sessions % 2 == 1 {
        counts[mid] as f64
    } else {
        (counts[mid - 1] + counts[mid]) as f64 / 2.0
    };
    let max_steps_observed = counts[sessions - 1];
    let mean_steps = counts.iter().sum::<usize>() as f64 / sessions as f64;
    let converged = traces.iter().filter(|t| t.converged).count();

    let len = max_steps_observed + 1;
    let mut sums = vec![0.0; len];
    for t in traces {
        let curve = t.fidelity_curve();
        let pad = if t.converged { 1.0 } else { t.final_fidelity() };
        for (k, slot) in sums.iter_mut().enumerate() {
            *slot += curve.get(k).copied().unwrap_or(pad);
        }
    }
    let mean_fidelity_curve = sums.into_iter().map(|s| s / sessions as f64).collect();

    BatchSummary {
        sessions,
        convergence_rate: converged as f64 / sessions as f64,
        mean_steps,
        median_steps,
        max_steps_observed,
        mean_fidelity_curve,
    }
}

pub fn run_batch(cfg: &TrainingConfig, sessions: usize) -> Result<BatchSummary> {
    if sessions == 0 {
        return Err(Error::InvalidConfig(
            "sessions must be at least 1".to_string(),
        ));
    }
    Ok(summarize(&run_sessions(cfg, sessions)?))
}
