//! `cornerforge`: constructions, counts and verifiers from the command line.
//!
//! Exit codes: 0 on success, 1 on malformed input or bad arguments, 2 when a
//! verifier finds a witness (the report still lists it).

mod construct;
mod count;
mod io;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "cornerforge", version, about = "Popular-difference constructions and brute-force verifiers")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, env = "CORNERFORGE_SEED")]
    seed: Option<u64>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Main output file (default: stdout).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a set or sequence; also writes a params JSON.
    #[command(subcommand)]
    Construct(construct::Construct),
    /// Count patterns, densities or homomorphisms.
    #[command(subcommand)]
    Count(count::Count),
    /// Check a property by brute force; exit 2 on failure.
    #[command(subcommand)]
    Verify(verify::Verify),
    /// Sample the randomized kernel construction over many seeds and
    /// compare the corner density with the kernel's triforce density.
    Report(count::ReportArgs),
}

/// Shared settings passed to every command.
pub struct Ctx {
    pub seed: Option<u64>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

/// What a command concluded.
pub enum Status {
    Ok,
    Failed,
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    if let Some(n) = cli.threads {
        anyhow::ensure!(n > 0, "--threads must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let ctx = Ctx { seed: cli.seed, format: cli.format, output: cli.output };
    match cli.command {
        Command::Construct(c) => construct::run(c, &ctx),
        Command::Count(c) => count::run(c, &ctx),
        Command::Verify(v) => verify::run(v, &ctx),
        Command::Report(r) => count::report(r, &ctx),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
