//! Command-line front end for `chsh-core`: scenario files in, reports out.

#![forbid(unsafe_code)]

pub mod commands;
pub mod failure;
pub mod report;
pub mod scenario;

pub use commands::{run, Cli, Command, Format, Outcome};
pub use failure::{ExitCode, Failure};
