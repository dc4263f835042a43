//! Configuration loading, experiment orchestration and file outputs behind
//! the `coevo` command.

pub mod config;
pub mod run;

pub use config::{ConfigError, ExperimentConfig, RawConfig};
pub use run::{run_experiment, RunError, RunSummary};
