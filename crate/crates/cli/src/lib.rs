//! JSON formats and command dispatch for the `idealconv` binary.

pub mod commands;
pub mod error;
pub mod fixture;
pub mod json;

pub use commands::{run, Cli, Outcome};
pub use error::{CliError, CliResult};
