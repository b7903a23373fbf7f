//! Command-line front end: JSON configuration with flag overrides, run
//! orchestration and CSV/JSON reporting.

mod commands;
mod config;
mod output;

pub use commands::{cmd_consistency, cmd_converge, cmd_run, CliError, Outcome};
pub use config::{CaseSpec, InlineCase, Overrides, RunConfig};
pub use output::format_float;
