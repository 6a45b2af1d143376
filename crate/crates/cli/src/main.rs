//! `loewner-lab`: run interpolation constructions, randomized suites, the
//! sequence-model examples and the constant estimate from the command line.
//!
//! Reports go to stdout as JSON; a one-line summary and the wall time go to
//! stderr. Exit codes: 0 success, 1 suite or claim failure, 2 invalid input.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "loewner-lab", version, about = "Löwner-interval interpolation and operator convexity toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an interpolant for an instance file and print its certificate.
    Interpolate(InterpolateArgs),
    /// Run a randomized suite.
    Test(TestArgs),
    /// Verify one of the sequence-model examples.
    Example(ExampleArgs),
    /// Estimate the constant in the perturbation bound of the exact interpolation.
    Constants(ConstantsArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Lemma {
    /// Compression `pxp = y` with slack `ε` on both sides.
    #[value(name = "2.5")]
    #[serde(rename = "2.5")]
    Slack,
    /// `pxp = pyp`, `k ≤ x ≤ h`, for `y ≤ h + ε`.
    #[value(name = "2.7")]
    #[serde(rename = "2.7")]
    OneSided,
    /// `pxp = pyp`, `k ≤ x ≤ h`, for `k − ε ≤ y ≤ h + ε`.
    #[value(name = "2.8")]
    #[serde(rename = "2.8")]
    Exact,
}

#[derive(Args, Debug, Serialize)]
pub struct InterpolateArgs {
    /// JSON instance `{"k", "h", "p", "y", "eps", "eta"}`.
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub lemma: Lemma,
    /// Overrides the instance's `eps`.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Overrides the instance's `eta`.
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Davis,
    Strong,
    Monotone,
    /// Slack interpolation contract.
    Lemma25,
    /// Column completion bounds.
    Lemma26,
    /// One-sided interpolation contract and shape ratio.
    Lemma27,
    /// Exact interpolation contract and shape ratio.
    Lemma28,
    /// Corner completion bounds.
    Corner,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Pass,
    Fail,
}

#[derive(Args, Debug, Serialize)]
pub struct TestArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Registry label for the convexity suites (`x^2`, `x^3`, `1/x`, `-sqrt`,
    /// `sqrt`, `x/(x+1)`, `exp`, `log`, `const:<c>`).
    #[arg(long, default_value = "x^2", allow_hyphen_values = true)]
    pub function: String,
    /// Closed sampling interval `lo,hi`; defaults to the function's registry interval.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub interval: Option<Vec<f64>>,
    /// Expected outcome of a convexity suite; defaults to the registry's known property.
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fixed `ε` for the slack and completion suites; by default it cycles over 1, 0.1, 0.01.
    #[arg(long)]
    pub eps: Option<f64>,
    /// `ε/η` for the one-sided and exact suites.
    #[arg(long)]
    pub ratio: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Which {
    /// Tilted line: strong semicontinuity against the test-net oracle.
    #[value(name = "1.8")]
    #[serde(rename = "1.8")]
    TiltedLine,
    /// Rank-one gaps that force a non-convergent interpolant.
    #[value(name = "2.11")]
    #[serde(rename = "2.11")]
    RankOne,
    /// Tilted plane: inverse fails the middle condition, shifted inverse fails the weak one.
    #[value(name = "4.5")]
    #[serde(rename = "4.5")]
    TiltedPlane,
}

#[derive(Args, Debug, Serialize)]
pub struct ExampleArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    /// Tilted line: the repeating values of `t_n`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub cycle: Option<Vec<f64>>,
    /// Tilted line: values of `t_n` before the cycle starts.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub prefix: Option<Vec<f64>>,
    /// Tilted line: `t_∞`.
    #[arg(long, allow_hyphen_values = true)]
    pub t_inf: Option<f64>,
    /// Rank-one gaps: the repeating values of `t_n`, each in `(0, 1)`.
    #[arg(long, value_delimiter = ',')]
    pub t_cycle: Option<Vec<f64>>,
    /// Rank-one gaps: `harmonic`, `geometric:<ratio>` or `power:<exponent>`.
    #[arg(long)]
    pub delta: Option<String>,
    /// Rank-one gaps: number of indices to build.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Tilted plane: angle in `(0, π/2)`.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Tilted plane: `a,b,c` for `h_∞ = [[a, b], [b, c]]`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub h_inf: Option<Vec<f64>>,
}

#[derive(Args, Debug, Serialize)]
pub struct ConstantsArgs {
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Values of `ε/η`.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("LOEWNER_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Invalid(format!("LOEWNER_LAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("cannot size the thread pool: {e}")))
}

/// Writes pretty JSON to stdout; a closed pipe is not an error.
fn emit<S: Serialize>(value: &S) {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = match &cli.command {
        Command::Interpolate(_) => "interpolate",
        Command::Test(_) => "test",
        Command::Example(_) => "example",
        Command::Constants(_) => "constants",
    };
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Interpolate(a) => commands::interpolate(a),
        Command::Test(a) => commands::test(a),
        Command::Example(a) => commands::example(a),
        Command::Constants(a) => commands::constants(a),
    });
    let secs = start.elapsed().as_secs_f64();
    match result {
        Ok(out) => {
            emit(&out.report);
            let status = if out.report.passed { "ok" } else { "FAILED" };
            eprintln!("{name}: {status}: {}", out.summary);
            eprintln!("wall time: {secs:.3} s");
            if out.report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let body = serde_json::json!({ "command": name, "error": e.to_string(), "exit_code": e.code() });
            emit(&body);
            eprintln!("{name}: error: {e}");
            ExitCode::from(e.code())
        }
    }
}
