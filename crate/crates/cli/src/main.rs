//! `entbundle`: classify entanglement bundles, run annealing simulations and
//! check the structural properties of embedded subspaces.

mod classify;
mod input;
mod output;
mod report;
mod simulate;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "entbundle", version, about = "Entanglement-spectrum bundles of constrained qubit subspaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group all bipartitions of an instance into bundles.
    Classify(classify::ClassifyArgs),
    /// Anneal a parity instance and record entropies, spectra and leakage.
    Simulate(simulate::SimulateArgs),
    /// Run the property suites on the built-in instances.
    Verify(verify::VerifyArgs),
    /// Compare the theoretical bundles with clusters of simulated entropies.
    Report(report::ReportArgs),
}

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Property(String),
    Resource(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Property(_) => 3,
            Failure::Resource(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Property(m) | Failure::Resource(m) => m,
        }
    }
}

impl From<entbundle::Error> for Failure {
    fn from(e: entbundle::Error) -> Self {
        match e {
            entbundle::Error::Resource { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

pub type CliResult<T = ()> = Result<T, Failure>;

fn configure_threads() -> CliResult {
    let Ok(value) = std::env::var("ENTBUNDLE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Input(format!("ENTBUNDLE_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Input(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> CliResult {
    configure_threads()?;
    match cli.command {
        Command::Classify(args) => classify::run(&args),
        Command::Simulate(args) => simulate::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Report(args) => report::run(&args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
