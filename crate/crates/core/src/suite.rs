//! The built-in scenario suite (the JSON files under `scenarios/`).

use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// `(name, JSON source)` for every suite scenario.
pub const SOURCES: &[(&str, &str)] = &[
    ("interval", include_str!("../scenarios/interval.json")),
    ("bockstein", include_str!("../scenarios/bockstein.json")),
    ("negation", include_str!("../scenarios/negation.json")),
    ("split-point", include_str!("../scenarios/split-point.json")),
    ("circle", include_str!("../scenarios/circle.json")),
    ("antipodal", include_str!("../scenarios/antipodal.json")),
];

pub fn load(name: &str) -> Result<Scenario> {
    let (_, text) = SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Invalid(format!("no suite scenario named `{name}`")))?;
    Scenario::from_json(text)
}

pub fn all() -> Result<Vec<Scenario>> {
    SOURCES.iter().map(|(_, text)| Scenario::from_json(text)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_scenario_parses_under_its_name() {
        for (name, _) in SOURCES {
            assert_eq!(load(name).unwrap().name, *name);
        }
    }
}
