//! Command-line experiment runner: heatmaps, training traces, batch statistics
//! and QASM export.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3 non-convergence of
//! `train --strict`.

pub mod config;
pub mod error;

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qperceptron::encoding::binary_to_code;
use qperceptron::experiments::{trace_to_jsonl, HeatmapGrid};
use qperceptron::perceptron::QasmProgram;
use qperceptron::sepsim::seeded_rng;
use qperceptron::trainer::{run_batch, run_session};
use qperceptron::{AlphabetSize, BinaryPattern, PatternCode, PerceptronCircuit, TrainingConfig};

use crate::config::FileConfig;
pub use crate::error::CliError;

const DEFAULT_SHOTS: u32 = 1024;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_SESSIONS: usize = 200;

#[derive(Debug, Parser)]
#[command(
    name = "qperceptron",
    version,
    about = "Separable-state quantum perceptron experiments"
)]
pub struct Cli {
    /// Settings file with `key = value` lines (seed, shots, m, max_steps,
    /// cycle_length, tolerance_floor, z_sigma, sessions).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub shots: Option<u32>,
    /// Alphabet size (power of two).
    #[arg(long)]
    pub m: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Match probabilities for every (input, weight) pair, as CSV and optional PPM.
    Heatmap {
        #[command(flatten)]
        common: Common,
        /// Digits (qubits) per pattern.
        #[arg(long)]
        qubits: usize,
        /// Exact probabilities even if shots are configured.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        ppm: Option<PathBuf>,
        /// Cross-check the exact grid against the dense statevector simulator.
        #[arg(long)]
        oracle: bool,
    },
    /// One training session written as JSON Lines.
    Train {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        training: TrainingArgs,
        #[arg(long)]
        out: PathBuf,
        /// Exit with code 3 if the session does not converge.
        #[arg(long)]
        strict: bool,
    },
    /// Independent sessions summarised as JSON.
    Batch {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        training: TrainingArgs,
        #[arg(long)]
        sessions: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// OPENQASM 2.0 program for one input/weight pair.
    Qasm {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact and shot-estimated match probability for one input/weight pair.
    Match {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub input: String,
    #[arg(long)]
    pub weight: String,
    /// Read patterns as pixel bit strings instead of digit codes.
    #[arg(long)]
    pub binary: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TrainingArgs {
    /// Target pattern code, e.g. 1122.
    #[arg(long)]
    pub target: String,
    /// Read the target as a pixel bit string.
    #[arg(long)]
    pub binary: bool,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub cycle_length: Option<usize>,
    #[arg(long)]
    pub tolerance_floor: Option<f64>,
    #[arg(long)]
    pub z_sigma: Option<f64>,
    /// Use exact probabilities instead of shot estimates.
    #[arg(long)]
    pub exact: bool,
    /// Record shot-estimated fidelity with this many shots.
    #[arg(long)]
    pub fidelity_shots: Option<u32>,
}

/// Flag values merged over the settings file.
struct Settings {
    seed: u64,
    shots: Option<u32>,
    m: AlphabetSize,
}

fn settings(common: &Common, file: &FileConfig) -> Result<Settings, CliError> {
    let m = common.m.or(file.m).unwrap_or(AlphabetSize::default().get());
    Ok(Settings {
        seed: common.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        shots: common.shots.or(file.shots),
        m: AlphabetSize::new(m)?,
    })
}

fn parse_pattern(s: &str, binary: bool, m: AlphabetSize) -> Result<PatternCode, CliError> {
    if binary {
        let bits: BinaryPattern = s.parse()?;
        Ok(binary_to_code(&bits, m))
    } else {
        Ok(PatternCode::parse(s, m)?)
    }
}

fn training_config(
    args: &TrainingArgs,
    s: &Settings,
    file: &FileConfig,
) -> Result<TrainingConfig, CliError> {
    let target = parse_pattern(&args.target, args.binary, s.m)?;
    let mut cfg = TrainingConfig::new(target);
    cfg.seed = s.seed;
    cfg.shots = s.shots.unwrap_or(DEFAULT_SHOTS);
    cfg.exact_measurement = args.exact;
    cfg.fidelity_shots = args.fidelity_shots;
    if let Some(v) = args.max_steps.or(file.max_steps) {
        cfg.max_steps = v;
    }
    if let Some(v) = args.cycle_length.or(file.cycle_length) {
        cfg.cycle_length = v;
    }
    if let Some(v) = args.tolerance_floor.or(file.tolerance_floor) {
        cfg.tolerance_floor = v;
    }
    if let Some(v) = args.z_sigma.or(file.z_sigma) {
        cfg.z_sigma = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Writes `contents` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(contents).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Runs a parsed command, writing human-readable output to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn std::io::Write) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let mut say = |line: String| {
        let _ = writeln!(stdout, "{line}");
    };

    match cli.command {
        Command::Heatmap {
            common,
            qubits,
            exact,
            out,
            ppm,
            oracle,
        } => {
            let s = settings(&common, &file)?;
            let grid = match s.shots.filter(|_| !exact) {
                Some(shots) => HeatmapGrid::sampled(s.m, qubits, shots, s.seed)?,
                None => HeatmapGrid::exact(s.m, qubits)?,
            };
            write_atomic(&out, grid.to_csv().as_bytes())?;
            if let Some(ppm) = ppm {
                write_atomic(&ppm, grid.to_ppm().as_bytes())?;
            }
            say(format!(
                "{0}x{0} grid, off-diagonal max {1:.6}",
                grid.size(),
                grid.off_diagonal_max()
            ));
            if oracle {
                let exact_grid = HeatmapGrid::exact(s.m, qubits)?;
                say(format!(
                    "oracle max deviation {:.3e}",
                    exact_grid.oracle_deviation()?
                ));
            }
        }
        Command::Train {
            common,
            training,
            out,
            strict,
        } => {
            let s = settings(&common, &file)?;
            let cfg = training_config(&training, &s, &file)?;
            let trace = run_session(&cfg)?;
            write_atomic(&out, trace_to_jsonl(&trace).as_bytes())?;
            say(format!(
                "converged: {}, steps: {}, final weight: {}, fidelity: {}",
                trace.converged,
                trace.total_steps,
                trace.final_weight(),
                trace.final_fidelity()
            ));
            if strict && !trace.converged {
                return Err(CliError::NotConverged {
                    steps: trace.total_steps,
                });
            }
        }
        Command::Batch {
            common,
            training,
            sessions,
            out,
        } => {
            let s = settings(&common, &file)?;
            let cfg = training_config(&training, &s, &file)?;
            let sessions = sessions.or(file.sessions).unwrap_or(DEFAULT_SESSIONS);
            let summary = run_batch(&cfg, sessions)?;
            let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
            json.push('\n');
            write_atomic(&out, json.as_bytes())?;
            say(format!(
                "sessions: {}, convergence rate: {}, mean steps: {}, median steps: {}",
                summary.sessions,
                summary.convergence_rate,
                summary.mean_steps,
                summary.median_steps
            ));
        }
        Command::Qasm { common, pair, out } => {
            let s = settings(&common, &file)?;
            let circuit = PerceptronCircuit::new(
                parse_pattern(&pair.input, pair.binary, s.m)?,
                parse_pattern(&pair.weight, pair.binary, s.m)?,
            )?;
            let program = QasmProgram::from_circuit(&circuit)?;
            write_atomic(&out, program.render().as_bytes())?;
            let counts = program.gate_counts();
            say(format!("single-qubit gates: {}", counts.single_qubit));
            say(format!("multi-qubit gates: {}", counts.multi_qubit));
        }
        Command::Match {
            common,
            pair,
            oracle,
        } => {
            let s = settings(&common, &file)?;
            let input = parse_pattern(&pair.input, pair.binary, s.m)?;
            let weight = parse_pattern(&pair.weight, pair.binary, s.m)?;
            let circuit = PerceptronCircuit::new(input.clone(), weight.clone())?;
            let shots = s.shots.unwrap_or(DEFAULT_SHOTS);
            let estimate = circuit.estimate_match(shots, &mut seeded_rng(s.seed))?;
            say(format!("exact: {:.6}", estimate.exact));
            if let Some(sampled) = estimate.sampled {
                say(format!(
                    "estimated: {:.6} ({} of {} shots)",
                    sampled.estimate(),
                    sampled.ones,
                    sampled.shots
                ));
            }
            if oracle {
                let dense = qperceptron::densesim::dense_run(&input, &weight)?;
                say(format!(
                    "oracle: {dense:.6} (deviation {:.3e})",
                    (dense - estimate.exact).abs()
                ));
            }
        }
    }
    Ok(())
}
