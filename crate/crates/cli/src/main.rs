//! `tractability` command-line tool.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tractability::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                Error::ResourceLimit(_) | Error::Truncation { .. } => 3,
                Error::Numeric(_) | Error::Internal(_) => 1,
                _ => 2,
            },
            CliError::Failed(_) => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Parser)]
#[command(name = "tractability", version, about = "Spectra, information complexity and tractability of tensor-product problems")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Flat key=value file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// sobolev-min, sobolev-cosh, korobov, sobolev-distance or brownian-min.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub anchor: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form eigenvalues (and min-kernel eigenfunction parameters).
    Eigs {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Nyström eigenvalues on a midpoint grid, optionally extrapolated.
    OracleEigs {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        extrapolate: bool,
    },
    /// Information complexity for arbitrary linear information.
    Complexity {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        eps: Option<f64>,
        /// Comma-separated dimensions.
        #[arg(long)]
        d: Option<String>,
    },
    /// Tractability classification.
    Classify {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Density whose integration functional matches the approximation norm.
    Density {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        samples: Option<usize>,
        /// Also write the SVG plot here (defaults next to a CSV output).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check the functional-versus-operator bounds on finite instances.
    VerifyThm1 {
        /// Problem file; random instances when omitted.
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long)]
        instances: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Run the reproduction suite and emit a pass/fail table.
    Reproduce {
        /// Comma-separated criterion ids.
        #[arg(long)]
        only: Option<String>,
        /// Shift one criterion's computed values (negative control).
        #[arg(long)]
        perturb: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
