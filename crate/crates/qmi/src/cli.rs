//! The `qmi` command line: JSON in, one JSON report out.
//!
//! Every subcommand prints a single report object on standard output with
//! the shape
//!
//! ```text
//! { "command": [...], "inputs": {...}, "config": {...},
//!   "payload": {...}, "timing_ms": ... }
//! ```
//!
//! Everything except `timing_ms` is a pure function of the inputs and the
//! configuration, so identical runs reproduce identical payload bytes.
//! Exit codes: 0 when a verdict was computed (including "not isometric"),
//! 1 on input or usage errors, 2 when an internal cross-check disagreed
//! with itself — the latter means a bug, not a property of the input.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::isometry::{decide_isometric, DecideConfig, IsoError};
use crate::json::ParseError;
use crate::m2cc::{admissibility_check, trace_preservation_check, ARep};
use crate::magic::{MagicError, MagicUnitary};
use crate::matrix::CMatrix;
use crate::metric::FiniteMetricSpace;
use crate::transport::CouplingProblem;

#[derive(Parser, Debug)]
#[command(
    name = "qmi",
    about = "Verify, certify, and refute isometry of (quantum) group actions on finite metric spaces",
    version
)]
struct Cli {
    /// Numerical tolerance for validation and verdicts.
    #[arg(long, global = true, default_value_t = crate::DEFAULT_TOL)]
    tolerance: f64,
    /// Seed for every random sweep.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Corroboration sample count.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    /// Worker fan-out for batch runs (recorded in the report; desk-scale
    /// instances run single-threaded).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite metric spaces.
    Metric {
        #[command(subcommand)]
        command: MetricCommand,
    },
    /// Magic biunitary grids.
    Magic {
        #[command(subcommand)]
        command: MagicCommand,
    },
    /// Constrained transport plans.
    Transport {
        #[command(subcommand)]
        command: TransportCommand,
    },
    /// Full isometry verdict with certificates or witness.
    Decide(DecideArgs),
    /// Classical permutation groups.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// The worked quantum example on M2 ⊕ C ⊕ C.
    M2cc {
        #[command(subcommand)]
        command: M2ccCommand,
    },
}

#[derive(Subcommand, Debug)]
enum MetricCommand {
    /// Validate a distance matrix against the metric axioms.
    Validate { file: PathBuf },
    /// Evaluate the Lipschitz seminorm of a function.
    Lipnorm {
        file: PathBuf,
        /// The function as a JSON list of numbers or [re, im] pairs.
        #[arg(long)]
        f: String,
    },
}

#[derive(Subcommand, Debug)]
enum MagicCommand {
    /// Validate a grid of projections as a magic biunitary.
    Validate { file: PathBuf },
    /// Run the two-route commutation check against a metric.
    CheckIso {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long)]
        magic: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum TransportCommand {
    /// Solve for a coupling with given marginals and support.
    Plan {
        /// Left marginals as a JSON list.
        #[arg(long)]
        alpha: String,
        /// Right marginals as a JSON list.
        #[arg(long)]
        beta: String,
        /// Path to the support relation: a JSON matrix of booleans.
        #[arg(long)]
        allowed: PathBuf,
    },
}

#[derive(Args, Debug)]
struct DecideArgs {
    #[arg(long)]
    metric: PathBuf,
    #[arg(long)]
    magic: PathBuf,
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    /// Enumerate the isometry group of a metric space.
    Isometries {
        #[arg(long)]
        metric: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum M2ccCommand {
    /// Check admissibility of a representation (default: the 2x2 swap
    /// quotient representation).
    Demo {
        #[arg(long)]
        rep: Option<PathBuf>,
    },
}

/// An error carrying its process exit code: 1 for input problems, 2 for
/// internal cross-check failures.
struct CliError {
    code: i32,
    kind: &'static str,
    message: String,
}

impl CliError {
    fn input(kind: &'static str, message: impl ToString) -> Self {
        CliError {
            code: 1,
            kind,
            message: message.to_string(),
        }
    }

    fn internal(message: impl ToString) -> Self {
        CliError {
            code: 2,
            kind: "internal",
            message: message.to_string(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::input("parse", e)
    }
}

impl From<MagicError> for CliError {
    fn from(e: MagicError) -> Self {
        match e {
            MagicError::InternalDisagreement { .. } => CliError::internal(e),
            _ => CliError::input("magic", e),
        }
    }
}

impl From<IsoError> for CliError {
    fn from(e: IsoError) -> Self {
        match e {
            IsoError::Inconsistent(_) | IsoError::UnexpectedInfeasibility { .. } => {
                CliError::internal(e)
            }
            IsoError::Magic(MagicError::InternalDisagreement { .. }) => CliError::internal(e),
            _ => CliError::input("isometry", e),
        }
    }
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

struct ReportBuilder {
    inputs: BTreeMap<&'static str, InputDigest>,
}

impl ReportBuilder {
    fn new() -> Self {
        ReportBuilder {
            inputs: BTreeMap::new(),
        }
    }

    fn read(&mut self, role: &'static str, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        self.inputs.insert(
            role,
            InputDigest {
                path: path.display().to_string(),
                sha256: format!("{:x}", hasher.finalize()),
            },
        );
        String::from_utf8(bytes)
            .map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))
    }
}

/// Entry point for the binary.
pub fn main_entry() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let mut stdout = std::io::stdout();
    run(&args, &mut stdout)
}

/// Parses `args` (including the program name), executes, and writes the
/// report; returns the process exit code.
pub fn run<W: Write>(args: &[String], out: &mut W) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{err}");
                    0
                }
                _ => {
                    eprintln!("{err}");
                    1
                }
            };
        }
    };

    let started = std::time::Instant::now();
    let mut builder = ReportBuilder::new();
    let outcome = execute(&cli, &mut builder);
    let (code, payload) = match outcome {
        Ok(payload) => (0, payload),
        Err(e) => (
            e.code,
            json!({ "error": { "kind": e.kind, "message": e.message } }),
        ),
    };

    let report = json!({
        "command": args.iter().skip(1).collect::<Vec<_>>(),
        "inputs": builder.inputs,
        "config": {
            "tolerance": cli.tolerance,
            "seed": cli.seed,
            "samples": cli.samples,
            "jobs": cli.jobs,
        },
        "payload": payload,
        "timing_ms": started.elapsed().as_millis() as u64,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serialization");
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => {
            let _ = writeln!(out, "{text}");
        }
    }
    code
}

fn execute(cli: &Cli, builder: &mut ReportBuilder) -> Result<Value, CliError> {
    match &cli.command {
        Command::Metric { command } => match command {
            MetricCommand::Validate { file } => {
                let text = builder.read("metric", file)?;
                let metric = FiniteMetricSpace::from_json_str(&text)?;
                Ok(json!({
                    "valid": true,
                    "n": metric.n(),
                    "levels": metric.distance_levels().values(),
                }))
            }
            MetricCommand::Lipnorm { file, f } => {
                let text = builder.read("metric", file)?;
                let metric = FiniteMetricSpace::from_json_str(&text)?;
                let function = crate::json::parse_complex_vec(f)?;
                let value = metric
                    .lipnorm(&function)
                    .map_err(|e| CliError::input("metric", e))?;
                Ok(json!({ "lipnorm": value }))
            }
        },
        Command::Magic { command } => match command {
            MagicCommand::Validate { file } => {
                let text = builder.read("magic", file)?;
                let magic = MagicUnitary::from_json_str(&text, cli.tolerance)?;
                Ok(json!({
                    "valid": true,
                    "n": magic.n(),
                    "dim": magic.dim(),
                }))
            }
            MagicCommand::CheckIso { metric, magic } => {
                let metric_text = builder.read("metric", metric)?;
                let magic_text = builder.read("magic", magic)?;
                let space = FiniteMetricSpace::from_json_str(&metric_text)?;
                let grid = MagicUnitary::from_json_str(&magic_text, cli.tolerance)?;
                let report = grid.check_commutation(&space, cli.tolerance)?;
                Ok(serde_json::to_value(report).expect("report serialization"))
            }
        },
        Command::Transport { command } => match command {
            TransportCommand::Plan {
                alpha,
                beta,
                allowed,
            } => {
                let alpha = crate::json::parse_real_vec(alpha)?;
                let beta = crate::json::parse_real_vec(beta)?;
                let allowed_text = builder.read("allowed", allowed)?;
                let allowed = crate::json::parse_bool_matrix(&allowed_text)?;
                let problem = CouplingProblem::new(alpha, beta, allowed, cli.tolerance)
                    .map_err(|e| CliError::input("transport", e))?;
                let outcome = problem.solve();
                Ok(match outcome {
                    crate::transport::TransportOutcome::Plan(plan) => json!({
                        "feasible": true,
                        "plan": plan.lambda,
                    }),
                    crate::transport::TransportOutcome::Infeasible(cert) => json!({
                        "feasible": false,
                        "certificate": cert,
                    }),
                })
            }
        },
        Command::Decide(args) => {
            let metric_text = builder.read("metric", &args.metric)?;
            let magic_text = builder.read("magic", &args.magic)?;
            let space = FiniteMetricSpace::from_json_str(&metric_text)?;
            let grid = MagicUnitary::from_json_str(&magic_text, cli.tolerance)?;
            let config = DecideConfig {
                eps: cli.tolerance,
                seed: cli.seed,
                samples: cli.samples,
                ..DecideConfig::default()
            };
            let verdict = decide_isometric(&grid, &space, &config)?;
            Ok(json!({
                "verdict": if verdict.isometric { "isometric" } else { "not_isometric" },
                "commutation": verdict.report,
                "max_defect": verdict.max_defect,
                "samples": verdict.samples,
                "certificates": verdict.certificates,
                "witness_searched": verdict.witness_searched,
                "witness": verdict.witness,
            }))
        }
        Command::Group { command } => match command {
            GroupCommand::Isometries { metric } => {
                let text = builder.read("metric", metric)?;
                let space = FiniteMetricSpace::from_json_str(&text)?;
                let group = crate::group::isometry_group(&space);
                Ok(json!({
                    "order": group.order(),
                    "elements": group.elements(),
                }))
            }
        },
        Command::M2cc { command } => match command {
            M2ccCommand::Demo { rep } => {
                let rep = match rep {
                    Some(path) => {
                        let text = builder.read("rep", path)?;
                        ARep::from_json_str(&text, cli.tolerance)?
                    }
                    None => default_demo_rep(cli.tolerance)?,
                };
                let report = admissibility_check(&rep, cli.samples, cli.seed, cli.tolerance)
                    .map_err(|e| CliError::input("m2cc", e))?;
                let preserves = trace_preservation_check(&rep, cli.tolerance);
                Ok(json!({
                    "dim": rep.dim(),
                    "admissible": report.admissible,
                    "samples_run": report.samples_run,
                    "max_defect": report.max_defect,
                    "witness": report.witness,
                    "trace_preserved": preserves,
                }))
            }
        },
    }
}

/// The 2x2 swap quotient representation: z the flip unitary, p = diag(1, 0).
fn default_demo_rep(eps: f64) -> Result<ARep, CliError> {
    let one = num_complex::Complex64::new(1.0, 0.0);
    let zero = num_complex::Complex64::new(0.0, 0.0);
    let u = CMatrix::from_rows(vec![vec![zero, one], vec![one, zero]])
        .map_err(|e| CliError::input("m2cc", e))?;
    ARep::quotient(u, CMatrix::diag(&[1.0, 0.0]), eps).map_err(|e| CliError::input("m2cc", e))
}

/// Test helper: run against string arguments and capture stdout.
pub fn run_captured(args: &[&str]) -> (i32, String) {
    let mut full = vec!["qmi".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    let mut buffer = Vec::new();
    let code = run(&full, &mut buffer);
    (code, String::from_utf8(buffer).expect("utf8 report"))
}
