//! Command-line front end for `costshare`.
//!
//! Every subcommand loads an instance (or a bare graph), runs one analysis and
//! renders a deterministic report. JSON reports carry `schema_version`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use costshare::bc::{DEFAULT_SEARCH_CAP};
use costshare::graph::DEFAULT_PATH_CAP;

mod commands;
mod error;
mod load;
mod render;
pub mod selftest;

pub use commands::run;
pub use error::CliError;
pub use load::{load, Loaded};

pub const SCHEMA_VERSION: u32 = 1;

/// Prefix for environment variables that mirror the global flags.
pub const ENV_PREFIX: &str = "COSTSHARE_";

#[derive(Debug, Parser)]
#[command(name = "costshare", version, about = "Enforceability, Bad Configurations and price of stability for two-player network design")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json, env = "COSTSHARE_FORMAT")]
    pub format: Format,
    /// Maximum number of simple paths per terminal pair.
    #[arg(long, global = true, default_value_t = DEFAULT_PATH_CAP, env = "COSTSHARE_PATH_CAP")]
    pub path_cap: usize,
    /// Maximum number of search expansions for Bad Configuration detection.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_CAP, env = "COSTSHARE_SEARCH_CAP")]
    pub search_cap: u64,
    /// Seed for commands that sample.
    #[arg(long, global = true, default_value_t = 0, env = "COSTSHARE_SEED")]
    pub seed: u64,
    /// Write a Graphviz rendering of the result to this file.
    #[arg(long, global = true, env = "COSTSHARE_DOT")]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Instance or graph JSON file; `-` reads stdin.
    #[arg(long, short, conflicts_with = "fixture", required_unless_present = "fixture")]
    pub input: Option<PathBuf>,
    /// Built-in fixture id or family id such as `wheel7`.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Parameter x of the `pos-lower-bound` fixture, as `p/q`.
    #[arg(long, default_value = "1")]
    pub x: String,
    /// Parameter epsilon of the `fig1-shapley` fixture, as `p/q`.
    #[arg(long, default_value = "1/4")]
    pub eps: String,
    /// Terminals `s1,t1,s2,t2` by vertex name, overriding the input's.
    #[arg(long, value_delimiter = ',')]
    pub terminals: Option<Vec<String>>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Optimal Steiner forests.
    Opt {
        #[command(flatten)]
        source: Source,
    },
    /// Decide whether a forest is enforceable and report the LP optimum.
    Enforce {
        #[command(flatten)]
        source: Source,
        /// `OPT` or a comma-separated list of edge ids.
        #[arg(long, default_value = "OPT")]
        forest: String,
        /// Also dump the separable protocol table.
        #[arg(long)]
        protocol: bool,
    },
    /// Optimal cost shares of a forest and their edge ordering.
    Shares {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "OPT")]
        forest: String,
        /// Push shares left.
        #[arg(long, conflicts_with = "max2")]
        pl: bool,
        /// Maximize player two's total after pushing left.
        #[arg(long)]
        max2: bool,
    },
    /// Search for a Bad Configuration.
    DetectBc {
        #[command(flatten)]
        source: Source,
        /// Skip the cheap structural prefilters and always search.
        #[arg(long)]
        no_prefilter: bool,
    },
    /// Cost function under which no optimal forest is enforceable.
    Witness {
        #[command(flatten)]
        source: Source,
    },
    /// Price of stability.
    Pos {
        #[command(flatten)]
        source: Source,
    },
    /// Efficiency verdict for a graph; samples terminals when none are given.
    Classify {
        #[command(flatten)]
        source: Source,
        /// Terminal tuples sampled when the input has none.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Emit a family graph (`gen wheel 7`) or a fixture (`gen fixture fig1bc1`).
    Gen {
        family: String,
        arg: String,
        #[arg(long, default_value = "1")]
        x: String,
        #[arg(long, default_value = "1/4")]
        eps: String,
    },
    /// Run the acceptance criteria end to end.
    Selftest {
        /// Smaller samples for a fast smoke run.
        #[arg(long)]
        quick: bool,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<usize>>,
    },
}
