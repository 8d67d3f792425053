//! The `timesub` command-line harness.

pub mod args;
pub mod bench;
pub mod commands;
pub mod config;
pub mod error;
pub mod seed;
pub mod sim;

pub use args::Cli;
pub use commands::{run, Ctx};
pub use config::RunConfig;
pub use error::CliError;
