//! `nnlif`: runs single trajectories and the numerical campaigns of the
//! weight-structured NNLIF solver, writing CSV and JSON artifacts.
//!
//! Exit codes: 0 on success, 2 for invalid input (including a missing
//! configuration file), 3 for numerical faults, 1 for anything else.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nnlif_core::SolverError;

#[derive(Debug, Parser)]
#[command(
    name = "nnlif",
    version,
    about = "Finite-volume solver for the weight-structured NNLIF model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads for the parallel campaigns.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Reserved; every code path is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Also write the assembled voltage matrices as CSV.
    #[arg(long, global = true)]
    dump_matrices: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Integrate one trajectory from the configured model.
    Run,
    /// Grid-refinement order tables in v, w and t.
    Orders,
    /// Distance to the quasi-steady state for a ladder of epsilons.
    Ap,
    /// Learning and recognition matrix for Hermite inputs.
    Learn,
    /// Excitatory steady and unsteady scenarios.
    Excitatory,
    /// Quasi-steady state for a supplied weight marginal.
    Steady,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Orders => "orders",
            Command::Ap => "ap",
            Command::Learn => "learn",
            Command::Excitatory => "excitatory",
            Command::Steady => "steady",
        }
    }
}

/// Why the program stopped.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Numerical(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Numerical(m) | Failure::Other(m) => m,
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        let text = e.to_string();
        if e.is_validation() {
            Failure::Invalid(text)
        } else {
            match e {
                SolverError::Io(_) | SolverError::Csv(_) | SolverError::Json(_) => Failure::Other(text),
                _ => Failure::Numerical(text),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let opts = commands::Options {
        command: cli.command.name(),
        config: cli.config,
        out: cli.out,
        seed: cli.seed,
        dump_matrices: cli.dump_matrices,
    };
    match commands::execute(&opts) {
        Ok(files) => {
            for f in files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
