//! File formats, experiment orchestration and the `edog` command-line tool
//! on top of [`edog_core`].

pub mod detectors;
pub mod error;
pub mod experiment;
pub mod formats;

pub use error::{CliError, Result};
