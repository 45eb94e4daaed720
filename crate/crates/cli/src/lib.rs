//! Batch runner behind the `phenon` binary.
//!
//! Each subcommand reads one JSON config, runs the experiment and writes
//! `result.json` plus CSV tables into the output directory. Exit codes:
//! `0` when every check passes, `2` when a measurement disagrees with theory,
//! `1` on any error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod run;

pub use config::{Experiment, ExperimentConfig};
pub use run::{execute, Outcome, Report, SweepRow};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book {}
