//! `cycleweights`: exact and asymptotic analysis of random permutations
//! with cycle weights.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric failure,
//! 4 verification failure.

mod commands;
mod config;
mod error;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{FileConfig, FlagOverrides};
use error::CliError;
use output::OutputFormat;

#[derive(Parser)]
#[command(
    name = "cycleweights",
    version,
    about = "Exact distributions, saddle-point asymptotics, limit laws, and exact sampling \
             for random permutations with cycle weights"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON config file; explicit flags override its entries
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Weight family: uniform, ewens, asymptotic_ewens, algebraic,
    /// sub_exp_growth, super_exp_growth, sub_exp_decay_power,
    /// sub_exp_decay_stretched, super_exp_decay, custom
    #[arg(long, global = true)]
    family: Option<String>,

    /// Limit parameter of the (asymptotically) constant families
    #[arg(long, global = true)]
    theta: Option<f64>,

    /// Regime exponent of the growth/decay families
    #[arg(long, global = true)]
    gamma: Option<f64>,

    /// Single permutation size
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Comma-separated list of sizes
    #[arg(long, global = true, value_delimiter = ',', value_name = "N1,N2,...")]
    n_grid: Option<Vec<usize>>,

    /// Statistic for `dist`: L1, K, or Rj (with --j)
    #[arg(long, global = true)]
    statistic: Option<String>,

    /// Number of Monte Carlo samples
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Stream seed for sampling
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cycle length for Rj
    #[arg(long, global = true)]
    j: Option<usize>,

    /// Largest cycle length tracked in batch statistics
    #[arg(long, global = true)]
    j_max: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Write output to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit (n, log_theta) over the n grid
    Weights,
    /// Emit (n, log_h) over the n grid
    Normalize,
    /// Exact pmf of a statistic at a single n
    Dist,
    /// Expected cycle counts at a single n
    Moments,
    /// Draw reproducible samples; JSON statistics or raw CSV rows
    Sample {
        /// Stream raw samples as CSV instead of aggregated statistics
        #[arg(long)]
        raw: bool,
    },
    /// Saddle radii, I_mu values, and the asymptotic ln h_n over the grid
    Saddle {
        /// Also run the exact recursion and report the gap
        #[arg(long)]
        with_exact: bool,
    },
    /// Compare exact quantities against the regime's limit laws
    Verify,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let flags = FlagOverrides {
        family: cli.family,
        theta: cli.theta,
        gamma: cli.gamma,
        n: cli.n,
        n_grid: cli.n_grid,
        statistic: cli.statistic,
        samples: cli.samples,
        seed: cli.seed,
        j: cli.j,
        j_max: cli.j_max,
        format: cli.format,
        out: cli.out,
    };
    let config = config::resolve(file, flags)?;
    match cli.command {
        Command::Weights => commands::cmd_weights(&config),
        Command::Normalize => commands::cmd_normalize(&config),
        Command::Dist => commands::cmd_dist(&config),
        Command::Moments => commands::cmd_moments(&config),
        Command::Sample { raw } => commands::cmd_sample(&config, raw),
        Command::Saddle { with_exact } => commands::cmd_saddle(&config, with_exact),
        Command::Verify => verify::cmd_verify(&config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
