//! Command-line front end for `hoffman-core`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 unsupported norm pair,
//! 3 input/output or dimension error, 4 relative-surjectivity detection
//! failure in `estimate-l2`.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hoffman_core::{Algorithm, Error, IndexSet, NormTag};

pub mod bench;
pub mod commands;
pub mod matrix_io;
pub mod report;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub const VERIFY: u8 = 1;
    pub const NORMS: u8 = 2;
    pub const IO: u8 = 3;
    pub const DETECTION: u8 = 4;

    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(Self::IO, message)
    }

    pub fn verify(message: impl Into<String>) -> Self {
        Self::new(Self::VERIFY, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

fn is_norm_error(e: &Error) -> bool {
    match e {
        Error::UnsupportedNorms { .. } => true,
        Error::Probe { source, .. } => is_norm_error(source),
        _ => false,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if is_norm_error(&e) { Self::NORMS } else { Self::IO };
        Self::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::io(format!("JSON: {e}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "hoffman", version, about = "Hoffman constants of linear systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a Hoffman constant and its certificate ledger.
    Compute(ComputeArgs),
    /// Bracket a Euclidean Hoffman constant with Dikin ellipsoids.
    #[command(name = "estimate-l2")]
    EstimateL2(EstimateArgs),
    /// Run seeded Gaussian trials and emit one CSV row per trial.
    Bench(BenchArgs),
    /// Check a ledger's certificates, optionally against a matrix.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[arg(long, default_value = "ineq")]
    pub variant: String,
    /// Matrix of the inequalities (or equations for mixed variants).
    #[arg(long = "A", value_name = "PATH")]
    pub a: Option<PathBuf>,
    /// Inequality block of a mixed system.
    #[arg(long = "C", value_name = "PATH")]
    pub c: Option<PathBuf>,
    /// Rows measured by the restricted constant, one-based, e.g. "1,3,5".
    #[arg(long = "L", value_name = "LIST")]
    pub l: Option<String>,
    #[arg(long, value_name = "NORM")]
    pub norm_dom: Option<String>,
    #[arg(long, value_name = "NORM")]
    pub norm_cod: Option<String>,
    #[arg(long, default_value = "1")]
    pub algo: String,
    /// Also construct a right-hand side and point attaining H.
    #[arg(long)]
    pub witness: bool,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long = "A", value_name = "PATH")]
    pub a: Option<PathBuf>,
    #[arg(long = "C", value_name = "PATH")]
    pub c: Option<PathBuf>,
    /// One-based inequality set. Without it the whole constant is bracketed.
    #[arg(long = "J", value_name = "LIST")]
    pub j: Option<String>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "1")]
    pub algo: String,
    #[arg(long, value_name = "NORM", default_value = "linf")]
    pub norm_dom: String,
    #[arg(long, value_name = "NORM", default_value = "linf")]
    pub norm_cod: String,
    /// Check every ledger's cover exhaustively; exit 1 if any fails.
    #[arg(long)]
    pub verify: bool,
    /// Fill the wallclock column instead of writing NA.
    #[arg(long)]
    pub timing: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A report from `compute` or a bare ledger document.
    #[arg(long, value_name = "PATH")]
    pub ledger: PathBuf,
    /// Re-probe every certificate against this matrix.
    #[arg(long = "A", value_name = "PATH")]
    pub a: Option<PathBuf>,
    #[arg(long = "C", value_name = "PATH")]
    pub c: Option<PathBuf>,
    /// Variant of a bare ledger; a report carries its own.
    #[arg(long)]
    pub variant: Option<String>,
}

pub fn parse_norm(s: &str) -> Result<NormTag, CliError> {
    s.parse().map_err(|e: Error| CliError::io(e.to_string()))
}

pub fn parse_algo(s: &str) -> Result<Algorithm, CliError> {
    s.parse().map_err(|e: Error| CliError::io(e.to_string()))
}

/// Parses a one-based list such as `"1,3,5"`; the empty string is `∅`.
pub fn parse_index_list(s: &str, universe: usize) -> Result<IndexSet, CliError> {
    let members = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::io(format!("`{t}` is not an index")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    IndexSet::from_one_based(universe, &members).map_err(CliError::from)
}

/// Runs one command, writing its result to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Compute(args) => commands::compute(&args, out),
        Command::EstimateL2(args) => commands::estimate_l2(&args, out),
        Command::Bench(args) => bench::run(&args, out),
        Command::Verify(args) => commands::verify(&args, out),
    }
}
