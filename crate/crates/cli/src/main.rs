//! `lcorners`: experiment driver for the Laguerre corners library.
//!
//! Data always goes to `--out`; stdout carries a one-line summary. Exit codes: 0 success,
//! 2 invalid arguments, 3 numeric failure, 4 I/O.

mod commands;
mod config;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use config::{Format, Params};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "lcorners", version, about = "Laguerre corners process experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    params: Params,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Crystal roots l_{i,k} (--N --n) or Bessel zeros (--bessel --order --count).
    Roots,
    /// Covariances: --finite, --limit [--polymer] or --oracle.
    Cov,
    /// Monte Carlo checks: --polymer, --tridiag or --infinity.
    Mc,
    /// Sweeps over --Ns: --theorem1 (N² cov → limit), --roots or --qasymp.
    Converge,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Roots => "roots",
            Command::Cov => "cov",
            Command::Mc => "mc",
            Command::Converge => "converge",
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let params = cli.params.resolve()?;
    let out = params.out()?.to_path_buf();
    let outcome = match cli.command {
        Command::Roots => commands::roots(&params)?,
        Command::Cov => commands::cov(&params)?,
        Command::Mc => commands::mc(&params)?,
        Command::Converge => commands::converge(&params)?,
    };
    let mut table = outcome
        .table
        .meta("command", cli.command.name())
        .meta("config", params.to_json())
        .meta("version", laguerre_corners::VERSION)
        .meta("truncation", outcome.truncation);
    // Command-specific metadata first reads more naturally after the provenance lines.
    table.meta.rotate_right(4);
    let text = match params.format.unwrap_or_default() {
        Format::Csv => table.to_csv(),
        Format::Json => serde_json::to_string_pretty(&table.to_json())? + "\n",
    };
    std::fs::write(&out, text).with_context(|| format!("writing {}", out.display()))?;
    println!("{} -> {}: {}", cli.command.name(), out.display(), outcome.summary);
    Ok(())
}

/// 3 for numerical failures, 4 for I/O, 2 for everything else (bad input).
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<laguerre_corners::Error>() {
            return if e.is_numeric() { 3 } else { 2 };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 4;
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
