//! `pkernel`: bond, yield-curve and option pricing, path simulation and
//! verification suites from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numerical failure.

mod args;
mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use pricing_kernel::Error;

use args::{Cli, Command};
use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::InvalidParameter(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Config(format!("output: {e}"))
    }
}

fn open_output(cfg: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let o = cli.command.overrides();
    let cfg = RunConfig::load(o.config.as_deref(), o)?;
    let table = match cli.command {
        Command::PriceBond(_) => commands::price_bond(&cfg)?,
        Command::YieldCurve(_) => commands::yield_curve(&cfg)?,
        Command::PriceOption(_) => commands::price_option(&cfg)?,
        Command::Simulate(_) => commands::simulate(&cfg)?,
        Command::Verify(_) => {
            let reports = commands::verify(&cfg)?;
            let mut w = open_output(&cfg)?;
            serde_json::to_writer_pretty(&mut w, &reports).map_err(io::Error::from)?;
            writeln!(w)?;
            w.flush()?;
            return Ok(reports.iter().all(|r| !r.is_failure()));
        }
    };
    let mut w = open_output(&cfg)?;
    table.write(cfg.format, &mut w)?;
    w.flush()?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Config(msg)) => {
            eprintln!("pkernel: config error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("pkernel: numerical error: {msg}");
            ExitCode::from(3)
        }
    }
}
