//! `qfuchs`: validate `Sp(2,1)` matrices, compute Cartan invariants, run the
//! Fuchsian detector, generate fixtures and normalize boundary pairs.
//!
//! Exit codes: 0 success, 1 usage error, 2 failed check or unreadable input,
//! 3 trace audit failed, 4 detector inconclusive.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qfuchs_core::fixtures::FixtureKind;
use qfuchs_core::report::Report;

use input::Backend;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) => m,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qfuchs",
    version,
    about = "Quaternionic hyperbolic plane isometries and Fuchsian group detection"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Tolerance for float comparisons (ignored by the exact backend).
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Arithmetic backend for file inputs.
    #[arg(long, global = true, value_enum, default_value_t = Backend::Auto)]
    pub backend: Backend,
    /// Emit the JSON report (default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Emit a plain-text summary instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Membership residual, the 18 entry identities and the trace of each
    /// matrix in a presentation or single-matrix file.
    Validate { file: PathBuf },
    /// Triple product and Cartan angle of three boundary points.
    Cartan { file: PathBuf },
    /// Trace audit and detection of an invariant quaternionic line or a
    /// conjugacy into SO(2,1).
    Detect {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_word_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a deterministic fixture presentation.
    Gen(GenArgs),
    /// Isometry sending boundary points p, q to ∞, 0, applied to optional
    /// generators.
    Normalize { file: PathBuf },
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// so21-pair, hline-pair, generic-pair or single-diagonal.
    #[arg(long, value_parser = parse_kind)]
    pub kind: FixtureKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.5)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub lambda_max: f64,
    /// Trace audit length applied before writing; 0 skips it.
    #[arg(long, default_value_t = 6)]
    pub word_length: usize,
    /// Skip the trace-preserving conjugation.
    #[arg(long)]
    pub no_conjugate: bool,
    /// Unit quaternion `w,x,y,z`: the corner rotation μ of `diag(λμ, ν, μ/λ)`
    /// for single-diagonal.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Unit quaternion `w,x,y,z`: the middle entry ν for single-diagonal.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Output path; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<FixtureKind, String> {
    s.parse().map_err(|e: qfuchs_core::Error| e.to_string())
}

/// What a command produced: a report with its exit code, or raw text.
pub enum Outcome {
    Report(Report, u8),
    Text(String),
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    if !(g.tol >= 0.0 && g.tol.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tol must be a finite nonnegative number, got {}",
            g.tol
        )));
    }
    match cli.command {
        Command::Validate { file } => commands::validate(&file, g),
        Command::Cartan { file } => commands::cartan(&file, g),
        Command::Detect {
            file,
            max_word_len,
            seed,
        } => commands::detect(&file, max_word_len, seed, g),
        Command::Gen(args) => commands::gen(&args),
        Command::Normalize { file } => commands::normalize(&file, g),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|()| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let text = cli.global.text;
    match run(cli) {
        Ok(Outcome::Report(report, code)) => {
            if text {
                emit(&report.to_text());
            } else {
                emit(&(report.to_json() + "\n"));
            }
            ExitCode::from(code)
        }
        Ok(Outcome::Text(s)) => {
            emit(&s);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qfuchs: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
