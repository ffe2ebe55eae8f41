//! Brute-force statevector over all `n + 1` qubits.
//!
//! This is the verification path for the separable simulator: it runs the full
//! perceptron circuit, including an explicit multi-controlled NOT, on a dense
//! vector of `2^(n+1)` real amplitudes.
//!
//! Basis ordering: qubit 0 is the most significant bit of the basis index and
//! the ancilla (qubit `n`) is the least significant bit. Qubit `q` therefore
//! lives at bit `n - q`.
//!
//! Intended for small registers only (n ≲ 12).

use crate::encoding::PatternCode;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    data_qubits: usize,
    amplitudes: Vec<f64>,
}

impl DenseState {
    /// `|0…0⟩|0⟩ₐ` for `data_qubits` data qubits plus the ancilla.
    pub fn zero(data_qubits: usize) -> Self {
        let mut amplitudes = vec![0.0; 1 << (data_qubits + 1)];
        amplitudes[0] = 1.0;
        DenseState {
            data_qubits,
            amplitudes,
        }
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn data_qubits(&self) -> usize {
        self.data_qubits
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    fn mask(&self, qubit: usize) -> usize {
        assert!(qubit <= self.data_qubits, "qubit {qubit} out of range");
        1 << (self.data_qubits - qubit)
    }

    /// Real rotation by `theta` (encoding convention) on one qubit.
    pub fn rotate(&mut self, qubit: usize, theta: f64) {
        let mask = self.mask(qubit);
        let (sin, cos) = theta.sin_cos();
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i | mask];
                self.amplitudes[i] = cos * a0 - sin * a1;
                self.amplitudes[i | mask] = sin * a0 + cos * a1;
            }
        }
    }

    pub fn x(&mut self, qubit: usize) {
        let mask = self.mask(qubit);
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                self.amplitudes.swap(i, i | mask);
            }
        }
    }

    /// NOT on the ancilla controlled by every data qubit, as a basis permutation.
    pub fn multi_controlled_not(&mut self) {
        let controls = (self.amplitudes.len() - 1) & !1;
        self.amplitudes.swap(controls, controls | 1);
    }

    /// Probability of reading the ancilla as 1 (sum over odd basis indices).
    pub fn ancilla_one_probability(&self) -> f64 {
        self.amplitudes
            .iter()
            .skip(1)
            .step_by(2)
            .map(|a| a * a)
            .sum()
    }
}

/// Full circuit: input rotations, adjoint weight rotations, X on every data
/// qubit, then the multi-controlled NOT. Returns `P(ancilla = 1)`.
pub fn dense_run(input: &PatternCode, weight: &PatternCode) -> Result<f64> {
    input.check_compatible(weight)?;
    let n = input.len();
    let mut state = DenseState::zero(n);
    for (q, theta) in input.angles().into_iter().enumerate() {
        state.rotate(q, theta.radians());
    }
    for (q, theta) in weight.angles().into_iter().enumerate() {
        state.rotate(q, -theta.radians());
    }
    for q in 0..n {
        state.x(q);
    }
    state.multi_controlled_not();
    Ok(state.ancilla_one_probability())
}
