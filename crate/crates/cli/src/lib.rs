//! Command-line front end for `swarmlab`: config parsing and the
//! `run`, `compare`, `tune` and `analyze` commands.

pub mod commands;
pub mod config;

pub use commands::{analyze_command, compare_command, run_command, tune_command, Context};
pub use config::{parse_compare_config, parse_config, parse_tune_config, RunSpec};
