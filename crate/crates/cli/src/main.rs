//! Command-line front end: configuration, dataset ingestion, experiment
//! orchestration, machine-readable results.
//!
//! Every subcommand writes one JSON document `{manifest, results}` and is
//! replay-deterministic from its flags and seed; only the wall-clock fields
//! of the manifest differ between replays. Exit codes: 0 success, 1 runtime
//! failure, 2 flag/input validation failure.

mod commands;
mod dataset;
mod manifest;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Validation failures exit 2, runtime failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<pcoproc::Error> for CliError {
    fn from(e: pcoproc::Error) -> Self {
        // Core errors reachable from the CLI are configuration problems;
        // I/O failures are wrapped explicitly at the call sites.
        CliError::Usage(e.to_string())
    }
}

/// Sample counts accept plain integers or scientific notation (`1e6`).
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if f.is_finite() && f >= 1.0 && f <= 2f64.powi(53) && f.fract() == 0.0 {
        Ok(f as u64)
    } else {
        Err(format!("'{s}' is not a positive whole number"))
    }
}

#[derive(Parser)]
#[command(
    name = "pcoproc",
    version,
    about = "p-bit coprocessor emulation and benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo estimation of pi on parallel sampling blocks.
    Pi(PiArgs),
    /// Bootstrap resampling of a two-group CSV dataset into a histogram.
    Bootstrap(BootstrapArgs),
    /// Forward sampling of a family-tree Bayesian network.
    Bayes(BayesArgs),
    /// Annealed MCMC on a 0/1 knapsack instance with TTS analysis.
    Knapsack(KnapsackArgs),
}

#[derive(Args)]
pub struct PiArgs {
    /// Number of coordinate samples (accepts forms like 1e6).
    #[arg(long, value_parser = parse_count)]
    samples: u64,
    /// Parallel sampling blocks.
    #[arg(long, default_value_t = 2800)]
    blocks: u64,
    /// Bits per coordinate.
    #[arg(long, default_value_t = 18)]
    coord_bits: u32,
    /// Clock frequency in Hz.
    #[arg(long, default_value_t = 1.25e8)]
    fclk: f64,
    /// Pipeline fill latency in cycles.
    #[arg(long, default_value_t = 0)]
    depth: u64,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also report a projected TTS for a scaled-up machine.
    #[arg(long)]
    project: bool,
    /// Projection clock speed-up factor.
    #[arg(long, default_value_t = 8.0)]
    project_clock: f64,
    /// Projection block-count factor.
    #[arg(long, default_value_t = 357.0)]
    project_parallel: f64,
    /// Output path for the JSON document (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BootstrapArgs {
    /// CSV dataset with header `value,group` (group 0 = A, 1 = B).
    #[arg(long)]
    data: PathBuf,
    /// Histogram bin count.
    #[arg(long, default_value_t = 64)]
    bins: usize,
    /// Lower edge of the first bin (derived from the data if omitted).
    #[arg(long)]
    bin_lo: Option<f64>,
    /// Bin width (derived from the data if omitted).
    #[arg(long)]
    bin_width: Option<f64>,
    /// Bootstrap statistics to collect (rounded up to a block multiple).
    #[arg(long, value_parser = parse_count, default_value = "100000")]
    statistics: u64,
    /// Parallel serial-mean blocks.
    #[arg(long, default_value_t = 1500)]
    blocks: u64,
    /// Clock frequency in Hz.
    #[arg(long, default_value_t = 1.25e8)]
    fclk: f64,
    /// Pipeline fill latency in cycles.
    #[arg(long, default_value_t = 0)]
    depth: u64,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the JSON document (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BayesArgs {
    /// Family-tree generations.
    #[arg(long, default_value_t = 7)]
    generations: u32,
    /// Founder nodes in the first layer (power of two).
    #[arg(long, default_value_t = 64)]
    first_layer: usize,
    /// Independent network copies run as parallel blocks.
    #[arg(long, default_value_t = 10)]
    copies: u64,
    /// Total joint samples across all copies.
    #[arg(long, value_parser = parse_count, default_value = "100000")]
    samples: u64,
    /// Node pair `i,j` to report |correlation| for (repeatable).
    #[arg(long = "pair")]
    pairs: Vec<String>,
    /// Node subset `i,j,...` to tabulate a joint marginal for (repeatable).
    #[arg(long = "marginal")]
    marginals: Vec<String>,
    /// Clock frequency in Hz.
    #[arg(long, default_value_t = 1.25e8)]
    fclk: f64,
    /// Pipeline fill latency in cycles (default: one per layer past the
    /// founders).
    #[arg(long)]
    depth: Option<u64>,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the JSON document (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct KnapsackArgs {
    /// Generate a random instance with this many items.
    #[arg(long, conflicts_with = "instance")]
    n: Option<usize>,
    /// Load an instance from a JSON file {n, values, weights, capacity}.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Independent trials per sample budget.
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Parallel Markov chains per trial.
    #[arg(long, default_value_t = 10)]
    chains: u64,
    /// Sweep budgets n_s = 2^x * 10 for x in x_min..=x_max.
    #[arg(long)]
    sweep: bool,
    /// Smallest sweep exponent.
    #[arg(long, default_value_t = 1)]
    x_min: u32,
    /// Largest sweep exponent.
    #[arg(long, default_value_t = 14)]
    x_max: u32,
    /// Sample budget per chain when not sweeping.
    #[arg(long, value_parser = parse_count, default_value = "163840")]
    samples: u64,
    /// Initial annealing temperature.
    #[arg(long, default_value_t = 1000.0)]
    t0: f64,
    /// Success threshold as a fraction of the oracle optimum.
    #[arg(long, default_value_t = 0.99)]
    threshold: f64,
    /// Clock frequency in Hz.
    #[arg(long, default_value_t = 1.25e8)]
    fclk: f64,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the JSON document (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Pi(args) => commands::pi::run(args),
        Command::Bootstrap(args) => commands::bootstrap::run(args),
        Command::Bayes(args) => commands::bayes::run(args),
        Command::Knapsack(args) => commands::knapsack::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
