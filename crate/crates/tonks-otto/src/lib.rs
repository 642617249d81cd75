//! Command-line driver for the Tonks-Girardeau Otto engine: configuration,
//! subcommands and table output.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod grid_spec;
pub mod output;

pub use cli::{run, Cli};
pub use config::RunConfig;
pub use error::{CliError, CliResult};
