//! `orbitfix`: orbit partitions, automorphisms and isomorphism tests for
//! edge-colored digraphs.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use orbitfix_core::formats::Format;
use orbitfix_core::Strategy;

#[derive(Parser, Debug)]
#[command(name = "orbitfix", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Orbit partition with generators and certification status.
    Orbits { file: PathBuf },
    /// Generators of the automorphism group found by the engine.
    Auts { file: PathBuf },
    /// Isomorphism test; exit 0 isomorphic, 1 not, 2 inconclusive.
    Iso { file1: PathBuf, file2: PathBuf },
    /// Stable coloring under k-dimensional refinement.
    Refine { file: PathBuf },
    /// Orbits by exhaustive search (small graphs only).
    OracleOrbits { file: PathBuf },
    /// Every automorphism, by exhaustive search (small graphs only).
    OracleAut { file: PathBuf },
    /// Engine against the exhaustive oracle; exit 5 on disagreement.
    Verify { file: PathBuf },
    /// Checks whether a window set assembles into one matrix.
    Assembly { file: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Refinement dimension.
    #[arg(long, global = true, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub k: u8,
    /// Fix-vertex selection: least_fixed, min_class or first.
    #[arg(long, global = true, default_value = "least_fixed")]
    pub strategy: Strategy,
    /// Consecutive stalled iterations allowed before giving up.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Vertex limit for the exhaustive oracle.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_n: usize,
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Input format; sniffed from the header when absent.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Accepted for compatibility; every run is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Treat a lower_bound result as failure (exit 2).
    #[arg(long, global = true)]
    pub certify: bool,
    /// Report wall-clock time in runtime_ms (otherwise null).
    #[arg(long, global = true)]
    pub timing: bool,
}

pub mod exit {
    pub const OK: u8 = 0;
    pub const NON_ISOMORPHIC: u8 = 1;
    pub const INCONCLUSIVE: u8 = 2;
    pub const PARSE: u8 = 3;
    pub const USAGE: u8 = 4;
    pub const INVARIANT: u8 = 5;
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            });
        }
    };
    match commands::run(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(failure) => {
            eprintln!("orbitfix: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
