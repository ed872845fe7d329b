//! `hetnet`: analytic and Monte Carlo evaluation of DL/UL association and
//! throughput in a two-tier heterogeneous cellular network.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration error,
//! 3 I/O failure.

mod commands;
mod config_file;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hetnet_core::RngSeed;

use commands::McOptions;
use output::OutputFormat;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

/// Two-tier heterogeneous network engine: association probabilities under
/// decoupled DL/UL access, coverage, average throughput, and decoupling
/// gains, with closed forms cross-checked by a seeded simulator.
///
/// Simulation parallelism uses all cores by default; set RAYON_NUM_THREADS
/// to cap the worker count (useful in CI).
#[derive(Parser)]
#[command(name = "hetnet", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct McArgs {
    /// Monte Carlo realizations; omit to skip simulation columns.
    #[arg(long)]
    samples: Option<u64>,
    /// Base RNG seed; identical seeds reproduce byte-identical outputs.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Device-interference mode: `approx` or `accurate`.
    #[arg(long, default_value = "approx")]
    mode: String,
}

impl McArgs {
    fn options(&self) -> Result<Option<McOptions>, CliError> {
        self.samples
            .map(|samples| {
                Ok(McOptions {
                    samples,
                    seed: RngSeed(self.seed),
                    mode: config_file::parse_mode(&self.mode)?,
                })
            })
            .transpose()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Association-case probabilities, tier probabilities, and mean loads.
    Assoc {
        /// Network parameter file (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Output file path.
        #[arg(long)]
        out: PathBuf,
        /// Output format: `csv` or `json`.
        #[arg(long, default_value = "csv")]
        format: String,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Coverage, DL/UL throughput, and decoupling gains at one SINR target.
    Throughput {
        #[arg(long)]
        config: PathBuf,
        /// SINR target in dB.
        #[arg(long, default_value_t = 2.0)]
        gamma_db: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Evaluate a grid of femto densities or SINR targets from a sweep file.
    Sweep {
        /// Sweep specification file (TOML: variable, grid, base, optional mc).
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Compare every analytic scalar with its Monte Carlo estimate; exits 1
    /// when any comparison leaves its agreement band.
    Validate {
        #[arg(long)]
        config: PathBuf,
        /// SINR target in dB.
        #[arg(long, default_value_t = 2.0)]
        gamma_db: f64,
        /// Monte Carlo realizations (at least 1000).
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Device-interference mode: `approx` or `accurate`.
        #[arg(long, default_value = "approx")]
        mode: String,
        /// Optional file for the comparison table.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
        /// Perturbs one analytic constant before comparison. Detector
        /// self-test hook.
        #[arg(long, hide = true)]
        inject_analytic_bias: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Assoc {
            config,
            out,
            format,
            mc,
        } => commands::run_assoc(&config, &out, OutputFormat::parse(&format)?, mc.options()?),
        Command::Throughput {
            config,
            gamma_db,
            out,
            format,
            mc,
        } => commands::run_throughput(
            &config,
            gamma_db,
            &out,
            OutputFormat::parse(&format)?,
            mc.options()?,
        ),
        Command::Sweep {
            config,
            out,
            format,
        } => commands::run_sweep(&config, &out, OutputFormat::parse(&format)?),
        Command::Validate {
            config,
            gamma_db,
            samples,
            seed,
            mode,
            out,
            format,
            inject_analytic_bias,
        } => commands::run_validate(
            &config,
            gamma_db,
            samples,
            RngSeed(seed),
            config_file::parse_mode(&mode)?,
            out,
            OutputFormat::parse(&format)?,
            inject_analytic_bias,
        ),
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
