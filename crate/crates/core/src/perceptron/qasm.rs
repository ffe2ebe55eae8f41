//! OPENQASM 2.0 export of the perceptron circuit.
//!
//! Registers are fixed: `q[n+1]` with the ancilla at `q[n]`, and `c[1]` for the
//! ancilla readout. `prepare(θ)` is realised as `ry(2θ)` and the adjoint weight
//! layer as `ry(-2θ)`. Angles are printed as exact multiples of `pi`.
//!
//! The multi-controlled NOT is emitted as a single `cx`, `ccx`, `c3x` or `c4x`
//! from `qelib1.inc`, so larger registers are rejected.

use std::fmt::{self, Write as _};

use super::PerceptronCircuit;
use crate::error::{Error, Result};

pub const MAX_QASM_QUBITS: usize = 4;

/// Rational multiple of pi, `numer * pi / denom`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PiFraction {
    numer: i64,
    denom: u64,
}

impl PiFraction {
    pub fn new(numer: i64, denom: u64) -> Self {
        assert!(denom > 0, "zero denominator");
        let g = gcd(numer.unsigned_abs(), denom).max(1);
        PiFraction {
            numer: numer / g as i64,
            denom: denom / g,
        }
    }

    pub fn radians(self) -> f64 {
        self.numer as f64 * std::f64::consts::PI / self.denom as f64
    }

    fn neg(self) -> Self {
        PiFraction {
            numer: -self.numer,
            denom: self.denom,
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for PiFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numer == 0 {
            return f.write_str("0");
        }
        if self.numer < 0 {
            f.write_str("-")?;
        }
        match self.numer.unsigned_abs() {
            1 => f.write_str("pi")?,
            k => write!(f, "{k}*pi")?,
        }
        if self.denom != 1 {
            write!(f, "/{}", self.denom)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QasmStatement {
    Ry {
        qubit: usize,
        angle: PiFraction,
    },
    X {
        qubit: usize,
    },
    /// NOT on `target` controlled by every qubit in `controls`.
    Mcx {
        controls: Vec<usize>,
        target: usize,
    },
    Measure {
        qubit: usize,
        bit: usize,
    },
}

impl QasmStatement {
    pub fn is_multi_qubit(&self) -> bool {
        matches!(self, QasmStatement::Mcx { .. })
    }
}

impl fmt::Display for QasmStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QasmStatement::Ry { qubit, angle } => write!(f, "ry({angle}) q[{qubit}];"),
            QasmStatement::X { qubit } => write!(f, "x q[{qubit}];"),
            QasmStatement::Mcx { controls, target } => {
                let name = match controls.len() {
                    1 => "cx".to_string(),
                    2 => "ccx".to_string(),
                    k => format!("c{k}x"),
                };
                write!(f, "{name} ")?;
                for c in controls {
                    write!(f, "q[{c}],")?;
                }
                write!(f, "q[{target}];")
            }
            QasmStatement::Measure { qubit, bit } => write!(f, "measure q[{qubit}] -> c[{bit}];"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateCounts {
    pub single_qubit: usize,
    pub multi_qubit: usize,
    pub measurements: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QasmProgram {
    pub data_qubits: usize,
    pub statements: Vec<QasmStatement>,
}

impl QasmProgram {
    pub fn from_circuit(c: &PerceptronCircuit) -> Result<Self> {
        let n = c.qubits();
        if n > MAX_QASM_QUBITS {
            return Err(Error::UnsupportedSize(n));
        }
        let m = c.alphabet().get() as u64;
        // 2θ_j = 2jπ/m
        let doubled = |j: u32| PiFraction::new(2 * j as i64, m);

        let mut statements = Vec::with_capacity(3 * n + 2);
        for (qubit, &j) in c.input().digits().iter().enumerate() {
            statements.push(QasmStatement::Ry {
                qubit,
                angle: doubled(j),
            });
        }
        for (qubit, &j) in c.weight().digits().iter().enumerate() {
            statements.push(QasmStatement::Ry {
                qubit,
                angle: doubled(j).neg(),
            });
        }
        statements.extend((0..n).map(|qubit| QasmStatement::X { qubit }));
        statements.push(QasmStatement::Mcx {
            controls: (0..n).collect(),
            target: n,
        });
        statements.push(QasmStatement::Measure { qubit: n, bit: 0 });
        Ok(QasmProgram {
            data_qubits: n,
            statements,
        })
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for s in &self.statements {
            match s {
                QasmStatement::Ry { .. } | QasmStatement::X { .. } => counts.single_qubit += 1,
                QasmStatement::Mcx { .. } => counts.multi_qubit += 1,
                QasmStatement::Measure { .. } => counts.measurements += 1,
            }
        }
        counts
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("OPENQASM 2.0;\n");
        out.push_str("include \"qelib1.inc\";\n");
        let _ = writeln!(out, "qreg q[{}];", self.data_qubits + 1);
        out.push_str("creg c[1];\n");
        for s in &self.statements {
            let _ = writeln!(out, "{s}");
        }
        out
    }
}

pub fn emit_qasm(c: &PerceptronCircuit) -> Result<String> {
    Ok(QasmProgram::from_circuit(c)?.render())
}
