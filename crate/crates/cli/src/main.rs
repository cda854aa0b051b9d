//! `tdfejer`: group setup, identity verification, Fejer convergence and
//! maximal-inequality checks on truncated products of finite groups.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on
//! invalid configuration or input.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{RunArgs, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "tdfejer", version, about = "Fejer means and maximal inequalities on products of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the index arithmetic and character tables of the sequence.
    Group(RunArgs),
    /// Check every identity over seeded random functions.
    Verify(RunArgs),
    /// Tabulate ||sigma_n f - f||_2 and the Fejer kernel.
    Fejer(RunArgs),
    /// Evaluate maximal-inequality bounds.
    Maximal(RunArgs),
    /// Write Cayley tables, character tables and a function to --out.
    Export(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&RunArgs, fn(&RunConfig) -> Result<Outcome, config::Invalid>) = match &cli.command {
        Command::Group(a) => (a, commands::group),
        Command::Verify(a) => (a, commands::verify),
        Command::Fejer(a) => (a, commands::fejer),
        Command::Maximal(a) => (a, commands::maximal),
        Command::Export(a) => (a, commands::export),
    };
    let result = RunConfig::resolve(args).and_then(|cfg| run(&cfg));
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
