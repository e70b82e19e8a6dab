use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pricing_kernel::Measure;

use crate::config::{Family, Format};

#[derive(Debug, Parser)]
#[command(name = "pkernel", version, about = "Bond, option and path tools for heat-kernel pricing models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bond prices P(t, T) for each maturity and each L.
    PriceBond(Overrides),
    /// Prices and continuously compounded yields over a maturity grid.
    YieldCurve(Overrides),
    /// Call options on discount bonds.
    PriceOption(Overrides),
    /// Exact paths of the information process.
    Simulate(Overrides),
    /// Runs a verification suite and emits its reports as JSON.
    Verify(Overrides),
}

impl Command {
    pub fn overrides(&self) -> &Overrides {
        match self {
            Command::PriceBond(o)
            | Command::YieldCurve(o)
            | Command::PriceOption(o)
            | Command::Simulate(o)
            | Command::Verify(o) => o,
        }
    }
}

/// Flags shared by every command. Each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: Option<Family>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long = "U")]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Prior law as JSON, e.g. '{"type":"gaussian","mean":0,"variance":1}'.
    #[arg(long)]
    pub prior: Option<String>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Maturities, comma separated.
    #[arg(long = "T", allow_hyphen_values = true)]
    pub maturity: Option<String>,
    /// Strikes, comma separated.
    #[arg(long = "K", allow_hyphen_values = true)]
    pub strike: Option<String>,
    /// Values of L, comma separated.
    #[arg(long = "L", allow_hyphen_values = true)]
    pub ell: Option<String>,
    /// `start:stop:n` or a comma-separated list.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub paths: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// P or B.
    #[arg(long)]
    pub measure: Option<Measure>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// default, supermartingale, pde, measure-change, closed-form or errata.
    #[arg(long)]
    pub suite: Option<String>,
}
