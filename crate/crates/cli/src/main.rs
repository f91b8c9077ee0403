mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::RunContext;
use config::{ConfigError, RunConfig};

#[derive(Parser)]
#[command(name = "swp", version, about = "Spin witness protocol analyses")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration; defaults apply to every missing field.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Overrides the Monte Carlo trial count (restart count for `loophole`).
    #[arg(long, global = true)]
    trials: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Corrections to the point-particle approximation over `taus`.
    Pea,
    /// W0, W1 and negativity against free-fall time for each `gammas` entry.
    ScanWitness,
    /// Likelihood-ratio distinction success rate against the gravity-free null.
    Success,
    /// Probability that the empirical W1 average is negative.
    Witneg,
    /// Success rate against the null with rescaled Casimir-Polder coupling.
    Differential,
    /// Tomography fidelities and negativity exceedance per `tomo_shots`.
    Tomo,
    /// Constrained likelihood search for a less entangled explanation of W1 data.
    Loophole,
}

fn run(cli: &Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = cli.trials {
        match cli.command {
            Command::Loophole => cfg.optimizer.restarts = trials,
            _ => cfg.trials = trials,
        }
    }
    cfg.validate()?;
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| ConfigError(format!("output directory {}: {e}", cli.out.display())))?;
    let ctx = RunContext { cfg, out: cli.out.clone() };
    let written = match cli.command {
        Command::Pea => commands::pea(&ctx),
        Command::ScanWitness => commands::scan(&ctx),
        Command::Success => commands::success(&ctx),
        Command::Witneg => commands::witneg(&ctx),
        Command::Differential => commands::differential(&ctx),
        Command::Tomo => commands::tomo(&ctx),
        Command::Loophole => commands::loophole(&ctx),
    }
    .context("run failed")?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<swp_core::Error>() {
        Some(e) if e.is_numerical() => 3,
        Some(swp_core::Error::Io(_) | swp_core::Error::Csv(_)) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
