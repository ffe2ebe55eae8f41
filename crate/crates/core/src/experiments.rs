//! Experiment grids and the text formats the command-line runner writes.
//!
//! * Heatmap CSV: comma-delimited, LF endings, a header row and column of
//!   decimal pattern indices, probabilities with 6 fractional digits.
//! * Heatmap PPM: ASCII `P2` greyscale, pixel value `round(255·P)`.
//! * Training trace: JSON Lines, one record per step, then a summary record.

use std::fmt::Write as _;

use serde::Serialize;

use crate::encoding::{code_to_decimal, AlphabetSize, PatternCode};
use crate::error::{Error, Result};
use crate::perceptron::PerceptronCircuit;
use crate::sepsim::{sample_ancilla, seeded_rng};
use crate::trainer::{case_label, TrainingStep, TrainingTrace};

/// Largest number of codes per heatmap axis.
pub const MAX_GRID_CODES: u64 = 4096;

/// Match probabilities for every (input, weight) pair of length-`n` codes.
/// Rows are inputs and columns weights, both ordered by decimal index.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapGrid {
    pub m: AlphabetSize,
    pub n: usize,
    values: Vec<f64>,
}

pub fn codes_per_axis(m: AlphabetSize, n: usize) -> Result<usize> {
    let mut total = 1u64;
    for _ in 0..n {
        total = total.saturating_mul(m.get() as u64);
    }
    if n == 0 || total > MAX_GRID_CODES {
        return Err(Error::GridTooLarge(total));
    }
    Ok(total as usize)
}

fn all_codes(m: AlphabetSize, n: usize) -> Result<Vec<PatternCode>> {
    let size = codes_per_axis(m, n)?;
    let codes: Vec<PatternCode> = (0..size as u64)
        .map(|k| PatternCode::from_index(k, n, m))
        .collect::<Result<_>>()?;
    debug_assert!(codes
        .iter()
        .enumerate()
        .all(|(k, c)| code_to_decimal(c) == k as u64));
    Ok(codes)
}

impl HeatmapGrid {
    /// Exact probabilities from the separable pipeline.
    pub fn exact(m: AlphabetSize, n: usize) -> Result<Self> {
        let codes = all_codes(m, n)?;
        let mut values = Vec::with_capacity(codes.len() * codes.len());
        for input in &codes {
            for weight in &codes {
                let c = PerceptronCircuit::new(input.clone(), weight.clone())?;
                values.push(c.exact_match_probability());
            }
        }
        Ok(HeatmapGrid { m, n, values })
    }

    /// Shot estimates; cells are sampled row-major from one generator seeded
    /// with `seed`.
    pub fn sampled(m: AlphabetSize, n: usize, shots: u32, seed: u64) -> Result<Self> {
        let mut grid = Self::exact(m, n)?;
        let mut rng = seeded_rng(seed);
        for v in &mut grid.values {
            *v = sample_ancilla(*v, shots, &mut rng)?.estimate();
        }
        Ok(grid)
    }

    pub fn size(&self) -> usize {
        (self.values.len() as f64).sqrt().round() as usize
    }

    pub fn get(&self, input: usize, weight: usize) -> f64 {
        self.values[input * self.size() + weight]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn diagonal(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.size()).map(move |k| self.get(k, k))
    }

    pub fn off_diagonal_max(&self) -> f64 {
        let size = self.size();
        let mut max = f64::NEG_INFINITY;
        for i in 0..size {
            for w in 0..size {
                if i != w {
                    max = max.max(self.get(i, w));
                }
            }
        }
        max
    }

    pub fn to_csv(&self) -> String {
        let size = self.size();
        let mut out = String::with_capacity((size + 1) * (size + 1) * 9);
        out.push_str("k_i\\k_w");
        for w in 0..size {
            let _ = write!(out, ",{w}");
        }
        out.push('\n');
        for i in 0..size {
            let _ = write!(out, "{i}");
            for w in 0..size {
                let _ = write!(out, ",{:.6}", self.get(i, w));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_ppm(&self) -> String {
        let size = self.size();
        let mut out = format!("P2\n{size} {size}\n255\n");
        for i in 0..size {
            let row: Vec<String> = (0..size)
                .map(|w| {
                    // snap round-off so that 0.5 - 1e-16 and 0.5 + 1e-16 share a pixel value
                    let p = (self.get(i, w) * 1e9).round() / 1e9;
                    ((255.0 * p).round() as u8).to_string()
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Largest deviation from the dense statevector oracle over all cells.
    #[cfg(feature = "verification")]
    pub fn oracle_deviation(&self) -> Result<f64> {
        let codes = all_codes(self.m, self.n)?;
        let mut worst: f64 = 0.0;
        for (i, input) in codes.iter().enumerate() {
            for (w, weight) in codes.iter().enumerate() {
                let dense = crate::densesim::dense_run(input, weight)?;
                worst = worst.max((dense - self.get(i, w)).abs());
            }
        }
        Ok(worst)
    }
}

#[derive(Serialize)]
struct StepRecord<'a> {
    step: usize,
    input: String,
    weight: String,
    measured: f64,
    expected: f64,
    case: &'a str,
    fidelity: f64,
}

#[derive(Serialize)]
struct SummaryRecord {
    converged: bool,
    total_steps: usize,
}

/// JSON object for one step; `weight` is the weight after the update.
pub fn step_record(step: &TrainingStep) -> String {
    let rec = StepRecord {
        step: step.step,
        input: step.input.to_string(),
        weight: step.weight_after.to_string(),
        measured: step.measured,
        expected: step.expected,
        case: case_label(step.case_applied),
        fidelity: step.fidelity,
    };
    serde_json::to_string(&rec).expect("step record serializes")
}

pub fn trace_to_jsonl(trace: &TrainingTrace) -> String {
    let mut out = String::new();
    for s in &trace.steps {
        out.push_str(&step_record(s));
        out.push('\n');
    }
    let summary = SummaryRecord {
        converged: trace.converged,
        total_steps: trace.total_steps,
    };
    out.push_str(&serde_json::to_string(&summary).expect("summary serializes"));
    out.push('\n');
    out
}
