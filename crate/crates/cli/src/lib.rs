//! Command-line front end: reads lattice and fixed-point data as JSON, runs
//! the computations of the `ellgen` crate and writes JSON reports.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;

use std::collections::BTreeMap;

use ellgen::elliptic::Lattice;
use ellgen::par::Execution;
use serde::Serialize;
use serde_json::Value;

pub use args::{Cli, Command, Common, Format};
pub use error::CliError;

#[derive(Debug, Serialize)]
pub struct CommandEcho {
    pub name: &'static str,
    /// effective options after merging flags, input options and defaults
    pub options: Value,
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub command: CommandEcho,
    /// SHA-256 of each file read, keyed by role
    pub input_digest: BTreeMap<&'static str, String>,
    pub lattice: Lattice,
    pub results: Value,
    pub warnings: Vec<String>,
}

/// A finished run: the report and a short human summary.
pub struct Outcome {
    pub report: ReportDocument,
    pub summary: String,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only serializable data")
    }
}

pub fn execution(common: &Common) -> Execution {
    if common.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    commands::dispatch(cli)
}
