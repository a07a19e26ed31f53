//! Command-line front end: configuration parsing, the `evolve`, `steady` and
//! `sweep` commands, and their CSV/JSON output.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{cmd_evolve, cmd_steady, cmd_sweep, CliError};
pub use config::{parse_config, ConfigError, Format, Preset, RunConfig};
