mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "cointjump", version, about = "Dependent Poisson jumps: joint laws, spread pricing and calibration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

/// Flags shared by every subcommand; command-line values override the
/// `[numerics]` and `[io]` sections.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (default: `io.output`, else `out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo paths; 0 disables the cross-check.
    #[arg(long, global = true)]
    pub paths: Option<usize>,
    #[arg(long, global = true)]
    pub tail_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Export the joint law of the jump counts as `m,n,prob`.
    Pmf,
    /// Simulate a pair of daily price series.
    Simulate,
    /// Price a spread, vanilla or interconnector contract.
    Price,
    /// Fit marginal and joint parameters to two price series.
    Calibrate,
    /// Recompute the reference tables and figures and compare.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Table2,
    Table3,
    Fig1,
    Fig2,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Pmf => commands::pmf::run(&cli.common),
        Command::Simulate => commands::simulate::run(&cli.common),
        Command::Price => commands::price::run(&cli.common),
        Command::Calibrate => commands::calibrate::run(&cli.common),
        Command::Reproduce { target } => commands::reproduce::run(&cli.common, target),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
