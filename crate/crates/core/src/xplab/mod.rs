//! Experiment harness: config ingestion, scenario-matrix execution, table
//! emission, and the command-line interface.

pub mod cli;
pub mod config;
pub mod csv;
pub mod runner;
pub mod tables;

pub use cli::cli;
pub use config::ExperimentConfig;
pub use runner::{run_matrix, MatrixOutcome, RunRecord};
