//! Command-line front end: constant tables, suite runs, parameter sweeps.

pub mod commands;
pub mod config;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{EXIT_FAILED, EXIT_OK, EXIT_USAGE};
pub use config::{ConfigError, SuiteConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}:{error}", path.display())]
    Config { path: PathBuf, error: ConfigError },
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Parser)]
#[command(name = "carleman", version, about = "Explicit constants and numerical checks for Carleman-type estimates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate constants over a parameter grid.
    Constants(commands::ConstantsArgs),
    /// Run a suite file and write its reports.
    Verify(commands::VerifyArgs),
    /// Constants, and optionally verified ratios, over a grid as CSV.
    Sweep(commands::SweepArgs),
    /// Geometric data of a domain descriptor.
    DomainInfo(commands::DomainInfoArgs),
}

/// Runs a parsed command line; errors are printed to `err` and mapped to
/// exit code 2.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Constants(a) => commands::cmd_constants(a, out),
        Command::Verify(a) => commands::cmd_verify(a, out, err),
        Command::Sweep(a) => commands::cmd_sweep(a, out),
        Command::DomainInfo(a) => commands::cmd_domain_info(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
