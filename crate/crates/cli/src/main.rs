//! `hyperblocks` command-line front end.

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Block partitions, enumeration and classification of finite hyperfields.
#[derive(Parser, Debug)]
#[command(name = "hyperblocks", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Multiplicative group, e.g. Z3, Z7, Z2xZ4.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Index of the element playing -1 (defaults to the identity).
    #[arg(long, global = true)]
    pub minus_one: Option<usize>,
    /// Write output here (census appends catalog lines).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Work limit: max blocks for census, max columns for count, enumeration
    /// size for fetvins.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Where a hyperfield comes from: a JSON file or a block selection.
#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Hyperfield JSON: {"group": .., "minus_one": .., "pi": ..}.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Block selection such as BD or 1,3 (needs --group).
    #[arg(long, conflicts_with = "input")]
    pub blocks: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Block partition of π and its coefficient matrix.
    Blocks,
    /// Enumerate all block selections and classify the hyperfields.
    Census {
        #[arg(long, value_enum, default_value_t = CensusMode::Full)]
        mode: CensusMode,
        /// Process only part i of n of the subsets, e.g. 0/4.
        #[arg(long)]
        shard: Option<String>,
        /// Run once for every legal -1.
        #[arg(long)]
        all_minus_ones: bool,
    },
    /// Check the hyperfield axioms.
    Verify {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Count ample block selections and compare with the lower bound.
    Count,
    /// Decide whether a hyperfield is a quotient of a field.
    Quotient {
        #[command(flatten)]
        input: InputArgs,
        /// Largest field order searched (default min(r^4, 100000)).
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Check or solve homogeneous linear systems.
    Fetvins {
        #[command(flatten)]
        input: InputArgs,
        /// Largest number of variables for the exhaustive check.
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        /// Solve this system (JSON matrix, -1 = zero) instead of checking.
        #[arg(long, value_name = "FILE")]
        system: Option<PathBuf>,
    },
    /// Describe a hyperfield or list a catalog.
    Show {
        #[command(flatten)]
        input: InputArgs,
        /// JSON-lines catalog to list.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["input", "blocks"])]
        catalog: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CensusMode {
    Full,
    AmpleOnly,
}

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const CLAIM_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const CAPACITY: u8 = 3;
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use hyperblocks::Error as E;
    match err.downcast_ref::<E>() {
        Some(E::Capacity { .. }) => exit::CAPACITY,
        Some(E::InvariantViolation(_)) => exit::CLAIM_FAILED,
        _ => exit::USAGE,
    }
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
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(exit::USAGE);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
