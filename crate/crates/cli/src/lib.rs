//! Command implementations behind the `opinion` binary.

pub mod commands;
pub mod error;
pub mod serve;

pub use error::CliError;
