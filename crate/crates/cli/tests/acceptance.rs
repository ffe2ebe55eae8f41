//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

#[path = "../../core/tests/common/qasm_check.rs"]
mod qasm_check;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use qperceptron::densesim::dense_run;
use qperceptron::encoding::{binary_to_code, digit_to_angle};
use qperceptron::experiments::HeatmapGrid;
use qperceptron::perceptron::emit_qasm;
use qperceptron::sepsim::{prepare, seeded_rng};
use qperceptron::trainer::{run_session, run_sessions, summarize};
use qperceptron::{AlphabetSize, PatternCode, PerceptronCircuit, TrainingConfig};
use rand::Rng;

const M4: AlphabetSize = AlphabetSize::QUATERNARY;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("{what} took {elapsed:?}, limit {limit:?}")
    })
}

fn codes(n: usize) -> Vec<PatternCode> {
    (0..4u64.pow(n as u32))
        .map(|k| PatternCode::from_index(k, n, M4).unwrap())
        .collect()
}

fn diagonal_identity() -> Outcome {
    let start = Instant::now();
    let g4 = HeatmapGrid::exact(M4, 4).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5), "n=4 exact heatmap")?;
    let g2 = HeatmapGrid::exact(M4, 2).map_err(|e| e.to_string())?;
    for (n, g, size) in [(2, &g2, 16), (4, &g4, 256)] {
        ensure(g.size() == size, || {
            format!("n={n}: grid size {}", g.size())
        })?;
        let worst = g.diagonal().map(|d| (d - 1.0).abs()).fold(0.0, f64::max);
        ensure(worst <= 1e-12, || {
            format!("n={n}: diagonal deviation {worst}")
        })?;
    }
    for n in [2, 4] {
        let g = HeatmapGrid::sampled(M4, n, 1024, 7).map_err(|e| e.to_string())?;
        ensure(g.diagonal().all(|d| d == 1.0), || {
            format!("n={n}: shot diagonal not exactly 1")
        })?;
    }
    Ok(format!("n=4 exact grid in {elapsed:.2?}"))
}

fn off_diagonal_bound() -> Outcome {
    let mut report = Vec::new();
    for n in [2, 4] {
        let exact = HeatmapGrid::exact(M4, n).map_err(|e| e.to_string())?;
        let max = exact.off_diagonal_max();
        ensure((max - 0.5).abs() <= 1e-12, || {
            format!("n={n}: exact off-diagonal max {max}")
        })?;
        let shots = HeatmapGrid::sampled(M4, n, 1024, 7).map_err(|e| e.to_string())?;
        let bound = 0.5 + 4.0 * (0.25f64 / 1024.0).sqrt();
        let smax = shots.off_diagonal_max();
        ensure(smax <= bound, || {
            format!("n={n}: shot off-diagonal max {smax} > {bound}")
        })?;
        report.push(format!("n={n} shot max {smax:.4}"));
    }
    Ok(report.join(", "))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for n in 1..=3 {
        let all = codes(n);
        for i in &all {
            for w in &all {
                let sep = PerceptronCircuit::new(i.clone(), w.clone())
                    .map_err(|e| e.to_string())?
                    .exact_match_probability();
                let dense = dense_run(i, w).map_err(|e| e.to_string())?;
                worst = worst.max((sep - dense).abs());
                pairs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10), "oracle sweep")?;
    ensure(worst <= 1e-10, || format!("max deviation {worst}"))?;
    Ok(format!(
        "{pairs} pairs, max deviation {worst:.1e}, {elapsed:.2?}"
    ))
}

fn closed_form_equivalence() -> Outcome {
    let mut rng = seeded_rng(12);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=8);
        let i: Vec<u32> = (0..n).map(|_| rng.random_range(0..4)).collect();
        let w: Vec<u32> = (0..n).map(|_| rng.random_range(0..4)).collect();
        let expected: f64 = i
            .iter()
            .zip(&w)
            .map(|(&a, &b)| ((a as f64 - b as f64) * PI / 4.0).cos().powi(2))
            .product();
        let c = PerceptronCircuit::new(
            PatternCode::new(i, M4).unwrap(),
            PatternCode::new(w, M4).unwrap(),
        )
        .unwrap();
        worst = worst.max((c.exact_match_probability() - expected).abs());
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst}"))?;
    Ok(format!("1000 pairs, max deviation {worst:.1e}"))
}

fn training_convergence() -> Outcome {
    let mut cfg = TrainingConfig::new(PatternCode::parse("1122", M4).unwrap());
    cfg.shots = 1024;
    cfg.max_steps = 10_000;
    cfg.seed = 2022;
    let start = Instant::now();
    let traces = run_sessions(&cfg, 200).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60), "200-session batch")?;
    let summary = summarize(&traces);
    ensure(summary.convergence_rate == 1.0, || {
        format!("convergence rate {}", summary.convergence_rate)
    })?;
    let bad = traces
        .iter()
        .filter(|t| t.converged && t.final_fidelity() != 1.0)
        .count();
    ensure(bad == 0, || {
        format!("{bad} converged sessions with final fidelity below 1")
    })?;
    ensure((10.0..=150.0).contains(&summary.mean_steps), || {
        format!("mean steps {} outside [10, 150]", summary.mean_steps)
    })?;
    Ok(format!(
        "rate 1.0, mean {:.1}, median {}, max {}, {elapsed:.2?}",
        summary.mean_steps, summary.median_steps, summary.max_steps_observed
    ))
}

fn single_session_reference() -> Outcome {
    let mut cfg = TrainingConfig::new(PatternCode::parse("1122", M4).unwrap());
    cfg.seed = 38;
    let trace = run_session(&cfg).map_err(|e| e.to_string())?;
    ensure(trace.converged && trace.final_fidelity() == 1.0, || {
        "session did not converge".into()
    })?;
    let learned = trace
        .steps
        .iter()
        .rposition(|s| s.case_applied.is_some())
        .map_or(0, |k| k + 1);
    Ok(format!(
        "illustration only: learned after {learned} steps, {} total with the clean cycle",
        trace.total_steps
    ))
}

fn qasm_gate_budget() -> Outcome {
    let mut programs = 0;
    for n in 1..=4 {
        let all = codes(n);
        let stride = if n <= 2 { 1 } else { 29 };
        for i in all.iter().step_by(stride) {
            for w in all.iter().step_by(stride) {
                let c = PerceptronCircuit::new(i.clone(), w.clone()).unwrap();
                let text = emit_qasm(&c).map_err(|e| e.to_string())?;
                let p = qasm_check::check(&text).map_err(|e| format!("{i}/{w}: {e}"))?;
                ensure(p.single_qubit == 3 * n && p.multi_qubit == 1, || {
                    format!(
                        "{i}/{w}: {} single, {} multi",
                        p.single_qubit, p.multi_qubit
                    )
                })?;
                programs += 1;
            }
        }
    }
    Ok(format!("{programs} programs well-formed with 3n + 1 gates"))
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qperceptron"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let runs: [(&str, Vec<&str>); 3] = [
        (
            "csv",
            vec![
                "heatmap", "--qubits", "2", "--shots", "1024", "--seed", "11",
            ],
        ),
        ("jsonl", vec!["train", "--target", "1122", "--seed", "11"]),
        (
            "json",
            vec![
                "batch",
                "--target",
                "1122",
                "--seed",
                "11",
                "--sessions",
                "20",
            ],
        ),
    ];
    for (ext, args) in &runs {
        let first = p(&format!("a.{ext}"));
        let second = p(&format!("b.{ext}"));
        for out in [&first, &second] {
            let mut full = args.clone();
            full.extend(["--out", out.as_str()]);
            run_cli(&full)?;
        }
        let read = |f: &str| std::fs::read(Path::new(f)).map_err(|e| e.to_string());
        ensure(read(&first)? == read(&second)?, || {
            format!("{ext} outputs differ")
        })?;
    }
    Ok("CSV, JSONL and JSON byte-identical across runs".into())
}

fn encoding_fixtures() -> Outcome {
    let code = binary_to_code(&"1001".parse().unwrap(), M4);
    ensure(code.digits() == [2, 1], || format!("1001 -> {code}"))?;
    let h = FRAC_1_SQRT_2;
    let expected = [(1.0, 0.0), (h, h), (0.0, 1.0), (h, -h)];
    for (j, (a, b)) in expected.into_iter().enumerate() {
        let s = prepare(digit_to_angle(j as u32, M4).unwrap());
        // state 3 agrees up to a global sign, so compare |0>/|1> probabilities
        // and the relative sign of the amplitudes
        ensure(
            (s.a * s.a - a * a).abs() <= 1e-12 && (s.b * s.b - b * b).abs() <= 1e-12,
            || format!("state {j}: ({}, {})", s.a, s.b),
        )?;
        ensure((s.a * s.b - a * b).abs() <= 1e-12, || {
            format!("state {j}: relative sign")
        })?;
        if j < 3 {
            ensure((s.a - a).abs() <= 1e-12 && (s.b - b).abs() <= 1e-12, || {
                format!("state {j}: amplitudes ({}, {})", s.a, s.b)
            })?;
        }
    }
    Ok("1001 -> 21, four single-qubit states".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("diagonal identity", diagonal_identity),
        ("off-diagonal bound", off_diagonal_bound),
        ("oracle equivalence", oracle_equivalence),
        ("closed-form equivalence", closed_form_equivalence),
        ("training convergence", training_convergence),
        ("single-session reference", single_session_reference),
        ("qasm gate budget", qasm_gate_budget),
        ("determinism", determinism),
        ("encoding fixtures", encoding_fixtures),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
