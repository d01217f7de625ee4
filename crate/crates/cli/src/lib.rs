//! Batch driver for `sobolev-trace`: loads a sampled function, runs one
//! command and writes JSON or CSV results.

pub mod commands;
mod error;
pub mod input;
pub mod job;
mod table;

pub use commands::{check_report, compare_rows, run, CheckReport, CompareRow, CompareSummary};
pub use error::{CliError, ExitStatus};
pub use job::{Command, JobSpec};
