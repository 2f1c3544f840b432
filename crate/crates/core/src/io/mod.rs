//! Configuration, file formats and the command runners behind the CLI.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod series;
pub mod state_dump;

pub use commands::{run_evolve, run_ground_state, run_observables};
pub use config::{ModelKind, RunConfig, StateSource};
pub use manifest::{ObservablesReport, RunManifest, VacuumFile};
