//! Library surface of the `sdc` command-line harness, split out so the
//! experiment runners and report writers are directly testable.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{run, CliError};
pub use config::{Cli, Command, OutputFormat, StateSpec};
