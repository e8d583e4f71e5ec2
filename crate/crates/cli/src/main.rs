//! `qdecouple`: command-line front end for the decoupling toolkit.
//!
//! Exit codes: 0 success, 2 parse or usage error, 3 violated precondition,
//! 4 decoupling bound violated by a Monte Carlo run, 5 verification failure.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod error;
mod files;
mod verify;

use commands::{CurveArgs, DivergenceArgs, McArgs};
use error::{CliError, CliResult};
use verify::VerifyArgs;

#[derive(Debug, Parser)]
#[command(name = "qdecouple", version, about)]
struct Cli {
    /// Worker threads for parallel sweeps; output does not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a divergence D(ρ‖σ) in bits, or `inf`.
    Divergence(DivergenceArgs),
    /// Tabulate achievable and converse exponents over a range of rates.
    ExponentCurve(CurveArgs),
    /// Monte Carlo decoupling error of the partial trace, with the one-shot bounds around it.
    DecoupleMc(McArgs),
    /// Run randomized verification suites.
    Verify(VerifyArgs),
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Divergence(args) => println!("{}", commands::divergence(&args)?),
        Command::ExponentCurve(args) => {
            let summary = commands::exponent_curve(&args)?;
            println!("critical_rate {}", summary.critical_rate);
            println!("exactness_threshold {}", summary.exactness_threshold);
        }
        Command::DecoupleMc(args) => println!("{}", commands::decouple_mc(&args)?),
        Command::Verify(args) => print!("{}", verify::verify(&args)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
