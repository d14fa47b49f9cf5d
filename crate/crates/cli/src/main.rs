//! Batch front-end of canonlab.
//!
//! Exit codes: 0 every gate passed, 1 a tolerance gate failed, 2 bad input
//! or a solver error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use config::Scenario;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input: {0}")]
    Input(String),
    #[error("solver: {0}")]
    Solver(#[from] canonlab::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Parser, Debug)]
#[command(name = "canonlab", version, about = "Canonical systems laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
struct Common {
    /// Scenario config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Scenarios run in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build H, its invariants, eikonal and diagonalization.
    Hamiltonian(Common),
    /// Run the forward solver and export traces.
    Simulate(Common),
    /// Compare a classical system with its canonical counterpart.
    Equivalence(Common),
    /// de Branges function sweep, Hermite-Biehler margins and kernel Gram.
    Debranges(Common),
    /// Control, connecting operators and wavefront amplitude.
    Bcmethod(Common),
}

type Runner = fn(&Scenario, &Path) -> Result<bool, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, run): (&Common, Runner) = match &cli.command {
        Command::Hamiltonian(c) => (c, commands::hamiltonian),
        Command::Simulate(c) => (c, commands::simulate),
        Command::Equivalence(c) => (c, commands::equivalence),
        Command::Debranges(c) => (c, commands::debranges),
        Command::Bcmethod(c) => (c, commands::bcmethod),
    };
    match execute(common, run) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(common: &Common, run: Runner) -> Result<bool, CliError> {
    let scenarios = config::load(&common.config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs.max(1))
        .build()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    let one = |s: &Scenario| -> Result<bool, CliError> {
        let dir = common.out.join(&s.name);
        std::fs::create_dir_all(&dir)?;
        let r = run(s, &dir);
        match &r {
            Ok(true) => eprintln!("{}: pass", s.name),
            Ok(false) => eprintln!("{}: FAIL", s.name),
            Err(e) => eprintln!("{}: error: {e}", s.name),
        }
        r
    };
    let results: Vec<Result<bool, CliError>> = if common.jobs > 1 {
        pool.install(|| scenarios.par_iter().map(one).collect())
    } else {
        scenarios.iter().map(one).collect()
    };
    let mut passed = true;
    let mut first_err = None;
    for r in results {
        match r {
            Ok(p) => passed &= p,
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(passed),
    }
}
