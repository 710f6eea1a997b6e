//! Command-line front end for the three-photon interference simulator.
//!
//! Four subcommands: `fringe` writes phase scans (ideal circuit or
//! multimode rate laws), `counts` turns a scan into seeded Poisson
//! detector records, `fit` runs the harmonic least-squares analysis on
//! either CSV format, and `reproduce` re-derives the headline numbers
//! and reports pass/fail. Scenario settings come from a flat key=value
//! config file with command-line overrides (CLI > file > defaults), and
//! every output file echoes its full resolved configuration so it can be
//! regenerated exactly.

pub mod commands;
pub mod config;
pub mod files;
pub mod report;

use std::fmt;

/// Process exit codes: validation problems exit 2, numerical failures 3.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        CliError::Validation(message.into())
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError::Numerical(message.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(message) => write!(f, "{message}"),
            CliError::Numerical(message) => write!(f, "numerical failure: {message}"),
        }
    }
}

impl std::error::Error for CliError {}
