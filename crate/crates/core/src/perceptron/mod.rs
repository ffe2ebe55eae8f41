//! The perceptron circuit: input layer, adjoint weight layer, X layer and a
//! single multi-controlled NOT onto the ancilla.

mod qasm;

pub use qasm::{emit_qasm, GateCounts, QasmProgram, QasmStatement};

use rand::Rng;

use crate::encoding::{AlphabetSize, PatternCode};
use crate::error::Result;
use crate::sepsim::{sample_ancilla, RotationGate, SeparableState, ShotResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerceptronCircuit {
    input: PatternCode,
    weight: PatternCode,
}

impl PerceptronCircuit {
    /// Both codes must have the same length and alphabet.
    pub fn new(input: PatternCode, weight: PatternCode) -> Result<Self> {
        input.check_compatible(&weight)?;
        Ok(PerceptronCircuit { input, weight })
    }

    pub fn input(&self) -> &PatternCode {
        &self.input
    }

    pub fn weight(&self) -> &PatternCode {
        &self.weight
    }

    pub fn alphabet(&self) -> AlphabetSize {
        self.input.alphabet()
    }

    /// Number of data qubits (the ancilla is extra).
    pub fn qubits(&self) -> usize {
        self.input.len()
    }

    /// Register state right before the multi-controlled NOT.
    pub fn pre_measurement_state(&self) -> SeparableState {
        let mut reg = SeparableState::from_angles(&self.input.angles());
        let adjoint: Vec<_> = self
            .weight
            .angles()
            .into_iter()
            .map(|t| RotationGate::new(t.radians()).adjoint())
            .collect();
        reg.rotate_each(&adjoint);
        reg.x_all();
        reg
    }

    /// Probability of reading the ancilla as 1, i.e. `|⟨w|i⟩|²`.
    pub fn exact_match_probability(&self) -> f64 {
        self.pre_measurement_state().all_ones_probability()
    }

    /// Exact probability plus a shot estimate drawn from `rng`.
    pub fn estimate_match<R: Rng + ?Sized>(
        &self,
        shots: u32,
        rng: &mut R,
    ) -> Result<MatchEstimate> {
        let exact = self.exact_match_probability();
        let sampled = sample_ancilla(exact, shots, rng)?;
        Ok(MatchEstimate {
            exact,
            sampled: Some(sampled),
        })
    }

    pub fn emit_qasm(&self) -> Result<String> {
        emit_qasm(self)
    }
}

/// Exact overlap and, when shots were taken, the measured ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchEstimate {
    pub exact: f64,
    pub sampled: Option<ShotResult>,
}

impl MatchEstimate {
    pub fn exact_only(exact: f64) -> Self {
        MatchEstimate {
            exact,
            sampled: None,
        }
    }

    pub fn estimated(&self) -> Option<f64> {
        self.sampled.map(|s| s.estimate())
    }

    pub fn shots(&self) -> Option<u32> {
        self.sampled.map(|s| s.shots)
    }

    /// The shot estimate if present, else the exact value.
    pub fn value(&self) -> f64 {
        self.estimated().unwrap_or(self.exact)
    }
}
