//! Command-line front end for the biharmonic toolkit.

pub mod commands;
pub mod config;
pub mod output;
pub mod suites;

use biharm_core::Error;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

/// Failure classes with their exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Invalid flags, configuration or parameters: exit 2.
    #[error("{0}")]
    Input(String),
    /// A verification, tolerance or hypothesis failure: exit 1.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Parse(_) | Error::Shape(_) | Error::UnsupportedDimension(_) => CliError::Input(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "biharm", version, about = "Kernels, exponent chains and solvers for Δ²u + k²u = f")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lebesgue exponent tables and the regularity bootstrap chain.
    #[command(subcommand)]
    Exponents(ExponentsCommand),
    /// Tabulate or verify the fundamental solution.
    #[command(subcommand)]
    Greens(GreensCommand),
    /// Linear or semilinear solves from a config file.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Cross-check the radial and spectral linear solvers.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
pub enum ExponentsCommand {
    /// One exponent interval: T, grad, lap (need --p), sobolev (--p as s),
    /// thm43 (--p, --q), window, initial (--sigma), critical.
    Table {
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value = "T")]
        table: String,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Full bootstrap trace.
    Chain {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        sigma: String,
        /// `text` or `csv`.
        #[arg(long, default_value = "text")]
        format: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum GreensCommand {
    /// CSV of `G`, `G'` and `ΔG` on log-spaced radii.
    Table {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 0.01)]
        rmin: f64,
        #[arg(long, default_value_t = 10.0)]
        rmax: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite: pde, recursion, decay, asympt or lp.
    Verify {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        suite: String,
    },
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Solution CSV path (stdout if absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SolveCommand {
    /// `Δ²u + k²u = f` for a radial source (`[linear]` section).
    Linear(ConfigArgs),
    /// Picard iteration for `Δ²u + a u = g(x,u)` (`[nonlinear]` section).
    Nonlinear {
        #[command(flatten)]
        args: ConfigArgs,
        /// Trace CSV path; defaults to `<output>.trace.csv` when `--output` is given.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Radial convolution against the spectral solve (`[oracle]` section).
    Compare(ConfigArgs),
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::run(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
