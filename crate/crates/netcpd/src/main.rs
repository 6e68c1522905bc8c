//! `netcpd` — change-point detection over evolving interaction networks.
//!
//! Three subcommands: `detect` runs the windowing → degree-distribution →
//! bootstrap-test pipeline over an interaction log; `synth` generates
//! scenarios with known change points; `bench` reproduces the canned
//! benchmarks, parameter grids, and real-event scoring.

mod bench;
mod config;
mod detect;
mod output;
mod pipeline;
mod synth;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::RngCore;

use crate::config::Config;
use crate::output::OutputFormat;

/// CLI failures, split by exit code: bad flags, config, or input data exit
/// with 2; failures producing output (or internal bugs) exit with 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<netcpd_core::ingest::IngestError> for CliError {
    fn from(e: netcpd_core::ingest::IngestError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<netcpd_core::detector::DetectorError> for CliError {
    fn from(e: netcpd_core::detector::DetectorError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<netcpd_core::synth::SynthError> for CliError {
    fn from(e: netcpd_core::synth::SynthError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<netcpd_core::evalbench::EvalError> for CliError {
    fn from(e: netcpd_core::evalbench::EvalError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "netcpd",
    version,
    about = "Detects change points in evolving interaction networks by comparing \
             the degree distributions of consecutive time windows under a \
             bootstrap significance test"
)]
struct Cli {
    /// RNG seed; when omitted one is drawn from entropy and printed to stderr
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Flat key=value config file mirroring flag names; explicit flags win
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Verdict stream format
    #[arg(long, global = true, value_parser = ["jsonl", "csv"])]
    format: Option<String>,

    /// Chatty diagnostics on stderr
    #[arg(long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect change points in an interaction log
    Detect(detect::DetectArgs),
    /// Generate a synthetic scenario with known change points
    Synth(synth::SynthArgs),
    /// Run benchmarks: canned experiments, parameter grids, or event scoring
    Bench(bench::BenchArgs),
}

/// Resolved global state shared by all subcommands.
pub struct Ctx {
    pub config: Config,
    pub seed: u64,
    pub format: OutputFormat,
    pub verbose: bool,
}

fn resolve_seed(flag: Option<u64>, config: &Config) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    if let Some(seed) = config.get_parsed::<u64>("seed")? {
        return Ok(seed);
    }
    let seed = rand::rngs::OsRng.next_u64();
    eprintln!("seed: {seed}");
    Ok(seed)
}

fn resolve_format(flag: Option<&str>, config: &Config) -> Result<OutputFormat, CliError> {
    match flag.or_else(|| config.raw("format")) {
        None => Ok(OutputFormat::Jsonl),
        Some(name) => output::parse_format(name).map_err(CliError::Input),
    }
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::empty(),
    };
    let format = resolve_format(cli.format.as_deref(), &config)?;
    let verbose = cli.verbose || config.get_bool("verbose")?;
    let seed = resolve_seed(cli.seed, &config)?;
    let ctx = Ctx { config, seed, format, verbose };
    match cli.command {
        Command::Detect(args) => detect::run(args, &ctx),
        Command::Synth(args) => synth::run(args, &ctx),
        Command::Bench(args) => bench::run(args, &ctx),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
