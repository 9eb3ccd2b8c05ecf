//! `detrep`: build, verify and benchmark determinantal representations.

mod bench;
mod build;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "detrep", version, about = "Determinantal representations as explicit matrix pencils")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a pencil (or a Waring decomposition) and print it.
    Build(build::BuildArgs),
    /// Check identity, regularity and equivariance of a construction.
    Verify(verify::VerifyArgs),
    /// Time permanent evaluation strategies on seeded matrices.
    Bench(bench::BenchArgs),
}

/// Outcome of a subcommand, mapped onto the exit code.
pub enum Outcome {
    Pass,
    Fail,
}

/// Error from bad input rather than a failed check.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(args) => build::run(args),
        Command::Verify(args) => verify::run(args),
        Command::Bench(args) => bench::run(args),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
