//! Scenario runner for the `strata` command: TOML configs, name-keyed
//! registries of scenarios, initial-data generators and steppers, and
//! CSV/JSON/SVG report emission.

pub mod config;
pub mod error;
pub mod generators;
pub mod registry;
pub mod report;
pub mod runner;
pub mod scenarios;

pub use config::ScenarioConfig;
pub use error::{CliError, Result};
pub use generators::{generators, sharpness_data, InitialData};
pub use registry::Registry;
pub use report::emit_report;
pub use runner::{regenerate_report, run_scenario, steppers, write_eigen_table, RunOptions, RunOutcome};
pub use scenarios::{scenarios, RunContext, Scenario};
