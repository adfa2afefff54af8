mod commands;
mod error;
mod named;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

/// Concurrence bounds and open-system entanglement dynamics.
///
/// States are JSON files ({"dims": [...], "matrix": [[[re, im], ...], ...]} or
/// {"dims": [...], "vector": [[re, im], ...]}) or names: ghz:N, w:N,
/// bell:phi+|phi-|psi+|psi-, maxent:d, hor33:a=A, hor24:a=A, horror:a=A.
///
/// Exit codes: 0 success, 1 parse error, 2 validation error, 3 numerical failure.
/// Every flag marked [env: ENTK_*] can be set through the environment;
/// ENTK_LOG sets the log level (default warn).
#[derive(Debug, Parser)]
#[command(name = "entk", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for every stochastic step.
    #[arg(long, global = true, env = "ENTK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Random simplex restarts for the optimized lower bound.
    #[arg(long, global = true, env = "ENTK_RESTARTS", default_value_t = 20)]
    pub restarts: usize,
    /// Absolute convergence tolerance of the lower-bound optimizer.
    #[arg(long, global = true, env = "ENTK_TOL", default_value_t = 1e-9)]
    pub tol: f64,
    /// Write output here instead of stdout.
    #[arg(short, long, global = true, env = "ENTK_OUTPUT")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Squared Schmidt coefficients of a pure state as CSV.
    Schmidt(commands::SchmidtArgs),
    /// Lower and upper concurrence bounds as a JSON report.
    Bounds(commands::BoundsArgs),
    /// Markovian evolution with independent reservoirs; CSV trajectory.
    Dynamics(commands::DynamicsArgs),
    /// Exponential fit A e^{-γt} + B of a trajectory column; JSON.
    Fit(commands::FitArgs),
    /// Writes a named state as a JSON state file.
    Gen(commands::GenArgs),
    /// Scans a Horodecki family over its parameter; CSV.
    PptScan(commands::PptScanArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::new().filter_level(log::LevelFilter::Warn).parse_env("ENTK_LOG").init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("entk: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
