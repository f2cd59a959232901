//! Batch driver for lattice gauge interferometry experiments.
//!
//! Subcommands: `basis` (sector dimensions), `potential` (static quark
//! potential and its linear fit), `interfere` (fringe sweeps and frequency
//! fits), `probe` (area-law verdict over an (R, L) grid, on the lattice or
//! on a toy R^β potential). All take a JSON config; see the README for the
//! schema and exit codes.

mod commands;
mod config;
mod error;
mod output;

use clap::{Parser, Subcommand};
use config::ExperimentConfig;
use error::CliError;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fluxtube",
    version,
    about = "Meson interferometry on abelian lattice gauge theories: string tension from fringes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment config: a path, or `-` for stdin
    #[arg(long, global = true)]
    config: Option<String>,

    /// Override the output directory
    #[arg(long, global = true)]
    out: Option<String>,

    /// Also emit SVG fringe plots
    #[arg(long, global = true)]
    svg: bool,

    /// Worker threads for parallel sweeps
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Override the eigensolver start-vector seed
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the requested charge sectors and report dimensions
    Basis,
    /// Ground energies per separation and the linear string-tension fit
    Potential,
    /// Run the interferometric sequence over T grids and fit the fringes
    Interfere,
    /// Area-law verdict across an (R, L) grid
    Probe,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config_path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::config("missing --config (path or `-` for stdin)"))?;
    let text = output::read_config_text(config_path)?;
    let mut cfg = ExperimentConfig::from_json(&text)?;

    if let Some(dir) = cli.out {
        cfg.output.dir = dir;
    }
    if cli.svg {
        cfg.output.svg = true;
    }
    if let Some(seed) = cli.seed {
        cfg.engine.seed = seed;
    }
    if let Some(threads) = cli.threads {
        init_threads(threads);
    }

    match cli.command {
        Command::Basis => commands::cmd_basis(&cfg),
        Command::Potential => commands::cmd_potential(&cfg),
        Command::Interfere => commands::cmd_interfere(&cfg),
        Command::Probe => commands::cmd_probe(&cfg),
    }
}

#[cfg(feature = "parallel")]
fn init_threads(threads: usize) {
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
    {
        eprintln!("warning: thread pool already initialized: {e}");
    }
}

#[cfg(not(feature = "parallel"))]
fn init_threads(_threads: usize) {
    eprintln!("warning: built without the `parallel` feature; --threads has no effect");
}
