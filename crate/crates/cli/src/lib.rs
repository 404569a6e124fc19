//! Command-line front end for `pureldp`: analytic tables, Monte-Carlo
//! benchmarks, exhaustive privacy checks and significance thresholds.
//!
//! Results go to stdout as CSV (default) or JSON; diagnostics go to stderr.
//! Exit codes: 0 success, 1 privacy-check failure, 2 usage or input error.

mod commands;
mod output;

pub use commands::{run, Cli, Command, Outcome};
pub use output::{Format, Precision};
