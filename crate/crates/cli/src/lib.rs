//! Command-line front end for the `kraus` measurement library.
//!
//! [`format`](mod@format) defines the JSON operator file shared by every subcommand and
//! [`commands`] implements the subcommands themselves. The `kraus` binary is a
//! thin wrapper around [`commands::run`].

pub mod commands;
pub mod format;

pub use commands::{run, Cli, CliError, Report};
pub use format::{FileError, Kind, OperatorFile, Payload};
