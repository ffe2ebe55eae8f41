//! Classical simulator for a separable-state quantum perceptron.
//!
//! Patterns are split into blocks of `k` pixels; each block becomes one digit of
//! an alphabet of size `m = 2^k` and is loaded into its own qubit by a single
//! real rotation. Matching an input against a weight takes one layer of input
//! rotations, one layer of adjoint weight rotations, an X on every data qubit
//! and a single multi-controlled NOT onto an ancilla, whose `|1⟩` probability is
//! the squared overlap `|⟨w|i⟩|²`.
//!
//! Modules:
//!
//! * [`encoding`]: bit strings, N-ary codes and angles.
//! * [`sepsim`]: product-state simulator and seeded shot sampling.
//! * [`densesim`]: dense statevector oracle (feature `verification`).
//! * [`perceptron`]: the circuit, its match probability and QASM export.
//! * [`trainer`]: the hybrid training loop and batch statistics.
//! * [`experiments`]: heatmap grids and the file formats written by the CLI.

pub mod encoding;
pub mod error;
pub mod experiments;
pub mod perceptron;
pub mod sepsim;
pub mod trainer;

#[cfg(feature = "verification")]
pub mod densesim;

pub use encoding::{AlphabetSize, Angle, BinaryPattern, PatternCode};
pub use error::{Error, Result};
pub use perceptron::{MatchEstimate, PerceptronCircuit};
pub use trainer::{BatchSummary, Mismatch, TrainingConfig, TrainingTrace};
