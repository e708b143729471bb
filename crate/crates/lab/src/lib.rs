//! Configuration, orchestration and persistence around the `kgsl` core:
//! TOML experiment files, binary snapshots, diagnostics CSV and JSON
//! summaries, and the `kgsl` command-line tool.

pub mod cli;
pub mod config;
pub mod error;
pub mod families;
pub mod normspec;
pub mod probes;
pub mod runner;
pub mod snapshot;

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
pub use runner::{simulate, RunOutcome};
pub use snapshot::SnapshotFile;
