use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable supplying a default master seed; flags and config
/// keys take precedence.
pub const SEED_ENV: &str = "NFL_LAB_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "nfl-lab",
    version,
    about = "Quantum no-free-lunch simulations: bounds, sweeps, Haar checks and rank thresholds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate bound curves for t = 0..=t-max.
    Bounds(BoundsArgs),
    /// Run a Monte Carlo sweep described by a JSON config.
    Sweep(SweepArgs),
    /// Compare Haar trace moments with their exact values.
    VerifyHaar(VerifyHaarArgs),
    /// Monte Carlo estimates of the classical bounds.
    ClassicalMc(ClassicalMcArgs),
    /// Minimal Schmidt rank needed to beat each classical bound.
    Thresholds(ThresholdsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Hilbert space dimension (at least 2).
    #[arg(long)]
    pub d: usize,
    /// Schmidt rank used by the quantum bound.
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Largest training-set size [default: d].
    #[arg(long)]
    pub t_max: Option<usize>,
    /// Comma-separated bound kinds, `all-closed-form` or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all-closed-form")]
    pub kinds: Vec<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON experiment config.
    #[arg(long)]
    pub config: PathBuf,
    /// Worker threads [default: available parallelism].
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyHaarArgs {
    /// Unitary dimension.
    #[arg(long)]
    pub d: usize,
    /// Haar unitaries to sample (at least 1000).
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Master seed.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum McKind {
    /// Bistochastic bound from random bistochastic matrices.
    Bistochastic,
    /// Haar-state estimate of the stochastic prefactor F(d).
    StochasticOracle,
}

#[derive(Debug, Args)]
pub struct ClassicalMcArgs {
    #[arg(long, value_enum)]
    pub kind: McKind,
    /// Dimension (at least 2).
    #[arg(long)]
    pub d: usize,
    /// Known columns (bistochastic only).
    #[arg(long, default_value_t = 0)]
    pub t: usize,
    /// Matrices (bistochastic) or Haar states (stochastic-oracle) to sample.
    #[arg(long, default_value_t = 1000)]
    pub matrices: usize,
    /// Master seed.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ThresholdsArgs {
    /// Dimension (at least 2).
    #[arg(long)]
    pub d: usize,
    /// Largest training-set size [default: d].
    #[arg(long)]
    pub t_max: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
