//! Scenario files, pipeline execution and reports for evidence fusion.

pub mod bundled;
pub mod error;
pub mod report;
pub mod runner;
pub mod scenario;
pub mod tables;

pub use bundled::{bundled, BUNDLED};
pub use error::{FuseError, Result};
pub use report::{render, DecisionReport, Format};
pub use runner::{execute, Execution, RunOptions};
pub use scenario::{parse_scenario, parse_scenario_str, Scenario};
pub use tables::{check_expected, TableCheck};

use std::path::Path;

/// Loads a scenario from a file, or from the bundled set when `spec` names
/// one and no such file exists.
pub fn load(spec: &str) -> Result<Scenario> {
    let path = Path::new(spec);
    if !path.exists() {
        if let Some(s) = bundled(spec) {
            return s;
        }
    }
    parse_scenario(path)
}
