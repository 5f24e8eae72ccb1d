//! Input documents, experiment commands and reports for the `rlim` binary.

pub mod error;
pub mod input;
pub mod report;
pub mod run;

pub use error::CliError;
pub use report::{Format, Report, Table};
pub use run::{run, Command, ExperimentConfig};
