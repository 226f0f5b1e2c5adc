//! Library half of the `duality-lab` binary: command implementations live
//! here so integration tests can drive them in-process.

pub mod check;
pub mod error;
pub mod example;
pub mod output;
pub mod parallel;
pub mod summarize;
pub mod sweep;

pub use error::CliError;
