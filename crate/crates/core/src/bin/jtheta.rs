//! `jtheta`: evaluate theta functions, inspect multipliers and run the
//! verification suites.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use jtheta::dedekind::dedekind_sum;
use jtheta::exec::Exec;
use jtheta::modular::{decompose_gamma, decompose_gamma2};
use jtheta::multipliers::{eta_epsilon, gamma2_alpha, gamma2_epsilon, theta1_epsilon, theta1_epsilon_closed_phase, theta1_epsilon_ext};
use jtheta::theta::{theta_series_capped, LatticePoint, DEFAULT_TOL, TERM_CAP};
use jtheta::transform::{eval_fast, reduce_tau};
use jtheta::verify::{parse_corpus, run, TrialConfig, SUITES};
use jtheta::{Complex, Error, Sl2Matrix, ThetaKind};

#[derive(Parser)]
#[command(name = "jtheta", version, about = "Jacobi theta functions and their modular multipliers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate θ₁..θ₄ at (z, τ) with argument reduction.
    Eval {
        /// 1-4 or theta1-theta4.
        kind: ThetaKind,
        /// Elliptic variable, e.g. 0.1 or 0.2+0.1i.
        #[arg(long, allow_hyphen_values = true)]
        z: Complex,
        /// Modular variable with positive imaginary part, e.g. 0.3+0.02i.
        #[arg(long, allow_hyphen_values = true)]
        tau: Complex,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Also sum the series directly at (z, τ) and report both.
        #[arg(long)]
        direct: bool,
    },
    /// Exact Dedekind sum s(h, k).
    Dedekind {
        #[arg(allow_hyphen_values = true)]
        h: BigInt,
        k: BigInt,
    },
    /// Exact multipliers of a matrix given as "[[a,b],[c,d]]".
    Multiplier { matrix: Sl2Matrix },
    /// Generator word of a matrix.
    Decompose {
        matrix: Sl2Matrix,
        /// Use T² and S₂ = (1 0; 2 1); the matrix must be in Γ(2).
        #[arg(long)]
        gamma2: bool,
    },
    /// Reduce τ into the fundamental domain.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        tau: Complex,
    },
    /// Run verification suites and write a JSON Lines report.
    Verify {
        /// Suite names, repeatable or comma separated; all suites if omitted.
        #[arg(long = "suite", value_delimiter = ',')]
        suites: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 20)]
        entry_bound: i64,
        /// Report file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Matrices to test instead of random draws, one "[[a,b],[c,d]]" per line.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Run trials on one thread.
        #[arg(long)]
        sequential: bool,
        /// List the suites and exit.
        #[arg(long)]
        list: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn print_json(value: &serde_json::Value) -> Result<bool, Error> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    emit(&text)
}

// A closed pipe (`| head`) is not an error worth a panic.
fn emit(text: &str) -> Result<bool, Error> {
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Error::Internal(e.to_string())),
        _ => Ok(true),
    }
}

fn dispatch(command: Command) -> Result<bool, Error> {
    match command {
        Command::Eval { kind, z, tau, tol, direct } => {
            let fast = eval_fast(kind, z, tau, tol)?;
            let mut out = json!({
                "kind": kind,
                "z": z,
                "tau": tau,
                "value": fast.value,
                "terms": fast.terms,
                "reduction": fast.reduction,
                "word": fast.word.to_string(),
                "tau_reduced": fast.tau_reduced,
            });
            if direct {
                let d = theta_series_capped(kind, &LatticePoint::new(z, tau)?, tol, TERM_CAP)?;
                out["direct"] = json!({ "value": d.value, "terms": d.terms });
            }
            print_json(&out)
        }
        Command::Dedekind { h, k } => {
            emit(&dedekind_sum(&h, &k)?.to_string())
        }
        Command::Multiplier { matrix } => {
            let (norm, flipped) = matrix.normalize_sign();
            let mut out = json!({ "matrix": matrix, "normalized": norm, "flipped": flipped });
            if norm.c() > &BigInt::from(0) {
                out["eta_epsilon"] = json!(eta_epsilon(&norm)?);
                out["theta1_epsilon"] = json!(theta1_epsilon(&norm)?);
                out["theta1_epsilon_principal"] = json!(gamma2_epsilon(&norm)?);
                out["theta1_epsilon_closed"] = json!(theta1_epsilon_closed_phase(&norm)?);
            } else {
                out["theta1_epsilon"] = json!(theta1_epsilon_ext(&norm)?);
                out["note"] = json!("c = 0: translation law, ε₁ extended by e^{πi(b+1)/4}");
            }
            if norm.is_gamma2() {
                let mut alpha = serde_json::Map::new();
                for kind in [ThetaKind::Theta2, ThetaKind::Theta3, ThetaKind::Theta4] {
                    alpha.insert(kind.to_string(), json!(gamma2_alpha(kind, &norm)?));
                }
                out["alpha"] = serde_json::Value::Object(alpha);
            }
            print_json(&out)
        }
        Command::Decompose { matrix, gamma2 } => {
            let word = if gamma2 { decompose_gamma2(&matrix)? } else { decompose_gamma(&matrix) };
            print_json(&json!({ "matrix": matrix, "display": word.to_string(), "word": word }))
        }
        Command::Reduce { tau } => {
            let (a, t) = reduce_tau(tau)?;
            print_json(&json!({ "tau": tau, "matrix": a, "tau_reduced": t }))
        }
        Command::Verify { suites, trials, seed, tol, entry_bound, out, corpus, sequential, list } => {
            if list {
                for s in SUITES {
                    println!("{:<20} {:<10} {}", s.name, format!("{:?}", s.class).to_lowercase(), s.about);
                }
                return Ok(true);
            }
            let mut config = TrialConfig { trials, seed, tol, entry_bound, ..TrialConfig::default() };
            if !suites.is_empty() {
                config.suites = suites;
            }
            if let Some(path) = corpus {
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                config.corpus = Some(parse_corpus(&text)?);
            }
            let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
            let report = run(&config, exec)?;
            let io_err = |e: io::Error| Error::Internal(e.to_string());
            match out {
                Some(path) => {
                    let file = File::create(&path).map_err(io_err)?;
                    let mut w = BufWriter::new(file);
                    report.write_jsonl(&mut w).map_err(io_err)?;
                    w.flush().map_err(io_err)?;
                }
                None => match report.write_jsonl(io::stdout().lock()) {
                    Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(io_err(e)),
                    _ => {}
                },
            }
            for s in &report.summary.summary {
                eprintln!(
                    "{:<20} {:>6} trials  {:>6} pass  {:>4} fail  {:>4} inconclusive  {:>4} skipped{}",
                    s.suite,
                    s.trials,
                    s.passed,
                    s.failed,
                    s.inconclusive,
                    s.skipped,
                    if s.ok() { "" } else { "  FAILED" }
                );
            }
            Ok(report.summary.pass)
        }
    }
}
