//! Scenario files, analysis reports and built-in demos for `beablekit`.

pub mod demo;
mod error;
pub mod report;
pub mod run;
pub mod scenario;
pub mod tools;

pub use demo::{demo, DemoParams, DEMO_NAMES};
pub use error::{CliError, CliResult};
pub use report::Report;
pub use run::{run, RunOptions};
pub use scenario::{emit_scenario, parse_scenario, parse_scenario_str, ScenarioFile};
