//! Scenario runner for the `maxwellgas` toolkit.
//!
//! A run reads one JSON configuration ([`config`]), dispatches on its mode
//! ([`scenario`]) and writes CSV and JSON artifacts stamped with
//! [`provenance`].  Fluid and lattice runs are followed by plot-ready column
//! files ([`plot`]).  Failures map to exit codes in [`failure`].

pub mod config;
pub mod failure;
pub mod plot;
pub mod provenance;
pub mod scenario;
pub mod verify;

pub use config::{parse_config, Mode, ScenarioConfig};
pub use failure::CliError;
pub use plot::emit_plot_data;
pub use scenario::run_scenario;

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "MAXWELLGAS_THREADS";
