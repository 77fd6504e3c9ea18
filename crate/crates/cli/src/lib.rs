//! Command-line front end for `rkeig-core`: file-based updates, location
//! vectors, scaling benchmarks with exponent fits, and accuracy sweeps.
//!
//! Exit codes: 0 on success, 2 for usage or input errors, 3 when the
//! numerical pipeline fails.

pub mod bench;
pub mod cmd;
pub mod compare;
pub mod fit;

use thiserror::Error;

pub use bench::{run_bench, BenchConfig, BenchRecord, BenchReport, FitRow, Method, Timing};
pub use cmd::{run, Cli, Command};
pub use compare::{parse_ranks, run_compare, Arm, CompareConfig, CompareRecord};
pub use fit::{fit_exponent, ExponentFit, MIN_FIT_SIZES};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("cannot write {0}")]
    Output(String),
    #[error(transparent)]
    Numerical(rkeig_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 3,
            _ => 2,
        }
    }

    /// Pipeline stage of a numerical failure.
    pub fn stage(&self) -> Option<rkeig_core::Stage> {
        match self {
            CliError::Numerical(rkeig_core::Error::Stage { stage, .. }) => Some(*stage),
            _ => None,
        }
    }
}

impl From<rkeig_core::Error> for CliError {
    /// Malformed data is an input error. Once the pipeline is past the basis
    /// change, a failure (overflow included) counts as numerical.
    fn from(e: rkeig_core::Error) -> Self {
        let in_pipeline = matches!(
            &e,
            rkeig_core::Error::Stage { stage, .. } if *stage != rkeig_core::Stage::Transform
        );
        if e.is_input_error() && !in_pipeline {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e)
        }
    }
}
