//! IO, experiment harness and CLI support for the `ffmsp-core` solvers.
//!
//! - [`instance_file`]: the plain-text instance format.
//! - [`fasta`]: FASTA reading for genome-derived instances.
//! - [`solve`]: runs one algorithm on one instance with a real clock.
//! - [`bench`]: suites of runs, RPD statistics and CSV output.

pub mod bench;
pub mod error;
pub mod fasta;
pub mod instance_file;
pub mod solve;

pub use error::{Error, Result};
pub use ffmsp_core as core;
