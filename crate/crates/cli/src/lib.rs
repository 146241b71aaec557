//! The `selfsim` command line: build groups from family specs, run the
//! structural checks, print JSON reports.

mod aut;
mod commands;
mod family;
mod report;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use family::{build, load_presentation, Built, FamilySpec};
pub use report::Report;

/// Overrides the table cap when `--table-cap` is absent.
pub const TABLE_CAP_ENV: &str = "SELFSIM_TABLE_CAP";

#[derive(Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] selfsim_core::Error),
}

#[derive(Parser, Debug)]
#[command(
    name = "selfsim",
    version,
    about = "Finite quotients of self-similar pro-p groups"
)]
pub struct Cli {
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest order that gets a full multiplication table.
    #[arg(long, global = true)]
    pub table_cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dump a group: generators, and optionally elements and table.
    Build {
        spec: String,
        #[arg(long)]
        table: bool,
    },
    /// Order, series, exponent, abelianization and generator rank.
    Report { spec: String },
    /// Self-similarity certificate for the family's standard filtration.
    Selfsim {
        spec: String,
        /// `ppower`, `tmap`, or a file of `level source target` lines.
        #[arg(long, default_value = "ppower")]
        phi: String,
        /// Automorphisms to check against when the group is too large to
        /// enumerate (repeatable).
        #[arg(long = "aut")]
        auts: Vec<String>,
    },
    /// Fixed-point propagation for one automorphism.
    Theorem1 {
        spec: String,
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value = "ppower")]
        phi: String,
    },
    /// Fixed-point-free automorphisms of a given order.
    Fpf {
        spec: String,
        #[arg(long)]
        order: usize,
    },
    /// Transfer kernels for normal subgroups with cyclic quotient.
    Transfer {
        spec: String,
        /// Work in G/G'' instead of G.
        #[arg(long)]
        metabelian: bool,
    },
    /// Order-2 automorphism acting without fixed points on G/G'.
    Prop4 {
        spec: String,
        #[arg(long)]
        sigma: String,
    },
    /// The inequality r > d²/4, from numbers or from a presentation.
    Gs {
        spec: Option<String>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        r: Option<u64>,
        /// Treat r as an upper bound on the relation rank.
        #[arg(long)]
        upper_bound: bool,
    },
    /// Coset enumeration.
    Tc {
        file: String,
        /// Subgroup generators separated by ';'.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Zassenhaus depth of every relator.
    Zdepth {
        file: String,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = selfsim_core::presentation::DEFAULT_MAGNUS_DEGREE)]
        degree: usize,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one invocation. `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        code: 0,
                        stdout: text,
                        stderr: String::new(),
                    }
                }
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let env_cap = std::env::var(TABLE_CAP_ENV).ok();
    match commands::execute(&cli, env_cap.as_deref()) {
        Ok((passed, report)) => Outcome {
            code: if passed { 0 } else { 1 },
            stdout: report.render(),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
