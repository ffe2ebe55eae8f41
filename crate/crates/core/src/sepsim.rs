//! Separable-register simulator with real amplitudes.
//!
//! Every gate in the perceptron circuit before the multi-controlled NOT acts on
//! a single qubit, so the register stays a product state and each qubit can be
//! tracked as its own `(a, b)` pair. The multi-controlled NOT itself is never
//! applied; only the probability it induces on the ancilla is computed.
//!
//! Angles are encoding angles: `prepare(θ)` yields `cosθ|0⟩ + sinθ|1⟩`. This is
//! `ry(2θ)` in the usual half-angle convention.
//!
//! Shots are drawn with [`SimRng`] (ChaCha8, seeded through
//! `SeedableRng::seed_from_u64`) as a sum of Bernoulli trials, one uniform
//! `f64` per shot, so traces are reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encoding::Angle;
use crate::error::{Error, Result};

/// The pseudo-random generator used for every stochastic step.
pub type SimRng = ChaCha8Rng;

/// Generator for `seed`, stream 0.
pub fn seeded_rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

/// Generator for `seed` on an independent stream, used to give each parallel
/// session its own sequence.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const PROBABILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub a: f64,
    pub b: f64,
}

impl QubitState {
    pub const ZERO: QubitState = QubitState { a: 1.0, b: 0.0 };
    pub const ONE: QubitState = QubitState { a: 0.0, b: 1.0 };

    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b
    }

    pub fn prob_one(&self) -> f64 {
        self.b * self.b
    }
}

/// Real rotation `[[cosθ, -sinθ], [sinθ, cosθ]]`. Negative angles give the adjoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationGate {
    pub theta: f64,
}

impl RotationGate {
    pub fn new(theta: f64) -> Self {
        RotationGate { theta }
    }

    pub fn adjoint(self) -> Self {
        RotationGate { theta: -self.theta }
    }
}

pub fn prepare(theta: Angle) -> QubitState {
    let (s, c) = theta.radians().sin_cos();
    QubitState { a: c, b: s }
}

pub fn apply_rotation(s: QubitState, g: RotationGate) -> QubitState {
    let (sin, cos) = g.theta.sin_cos();
    QubitState {
        a: s.a * cos - s.b * sin,
        b: s.a * sin + s.b * cos,
    }
}

pub fn apply_x(s: QubitState) -> QubitState {
    QubitState { a: s.b, b: s.a }
}

/// Product register of independent qubits, qubit 0 first.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableState {
    qubits: Vec<QubitState>,
}

impl SeparableState {
    pub fn new(qubits: Vec<QubitState>) -> Self {
        SeparableState { qubits }
    }

    /// One qubit per angle, each prepared from `|0⟩`.
    pub fn from_angles(angles: &[Angle]) -> Self {
        SeparableState {
            qubits: angles.iter().map(|&t| prepare(t)).collect(),
        }
    }

    pub fn qubits(&self) -> &[QubitState] {
        &self.qubits
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    /// Applies `gates[i]` to qubit `i`.
    ///
    /// Panics if the gate count differs from the qubit count.
    pub fn rotate_each(&mut self, gates: &[RotationGate]) {
        assert_eq!(gates.len(), self.qubits.len(), "one gate per qubit");
        for (q, &g) in self.qubits.iter_mut().zip(gates) {
            *q = apply_rotation(*q, g);
        }
    }

    pub fn x_all(&mut self) {
        for q in &mut self.qubits {
            *q = apply_x(*q);
        }
    }

    /// Probability that every qubit reads 1, i.e. that a NOT controlled on all
    /// of them flips the ancilla.
    pub fn all_ones_probability(&self) -> f64 {
        all_ones_probability(self)
    }
}

pub fn all_ones_probability(reg: &SeparableState) -> f64 {
    reg.qubits.iter().map(QubitState::prob_one).product()
}

/// Outcome counts for repeated ancilla measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotResult {
    pub ones: u32,
    pub shots: u32,
}

impl ShotResult {
    pub fn estimate(&self) -> f64 {
        self.ones as f64 / self.shots as f64
    }
}

/// Checks `p` against `[0, 1]`, clamping excursions no larger than `1e-9`.
pub fn clamp_probability(p: f64) -> Result<f64> {
    if !p.is_finite() || !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Draws `ones ~ Binomial(shots, p)` as `shots` Bernoulli trials.
pub fn sample_ancilla<R: Rng + ?Sized>(p: f64, shots: u32, rng: &mut R) -> Result<ShotResult> {
    let p = clamp_probability(p)?;
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    // uniform draws lie in [0, 1): p = 1 always hits, p = 0 never does
    let ones = (0..shots).filter(|_| rng.random::<f64>() < p).count() as u32;
    Ok(ShotResult { ones, shots })
}

/// [`sample_ancilla`] with a fresh generator for `seed`.
pub fn sample_ancilla_seeded(p: f64, shots: u32, seed: u64) -> Result<ShotResult> {
    sample_ancilla(p, shots, &mut seeded_rng(seed))
}
