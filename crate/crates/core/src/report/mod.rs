//! Scenarios, the check registry, and deterministic report assembly.

pub mod output;
pub mod registry;
pub mod runner;
pub mod scenario;

#[cfg(test)]
mod tests;

pub use output::{table_csv, to_json, to_text, write_report};
pub use registry::{describe, list, lookup, CheckInfo};
pub use runner::{run_check, run_scenario, CheckBlock, Table, VerificationReport};
pub use scenario::{CheckSpec, OutputSpec, Scenario, MAX_SEED, SCHEMA_VERSION};
/// Value type of check parameters.
pub use toml::Value as ParamValue;
