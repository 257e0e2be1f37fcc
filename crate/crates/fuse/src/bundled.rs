//! Scenarios shipped with the tool.

use crate::scenario::{parse_scenario_str, Scenario};
use crate::Result;

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../scenarios/", $name, ".json")))),*]
    };
}

/// Name and JSON text of every bundled scenario.
pub const BUNDLED: &[(&str, &str)] = bundle!(
    "vbied_example1",
    "vbied_example2",
    "vbied_example3",
    "vbied_example4",
    "vbied_example5",
    "vbied_example6",
    "vbied_example7",
    "vbied_example8",
    "vbied_example9",
    "vbied_example10",
    "vbied_example11",
);

pub fn bundled_text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a bundled scenario; `None` for an unknown name.
pub fn bundled(name: &str) -> Option<Result<Scenario>> {
    bundled_text(name).map(parse_scenario_str)
}
