//! Bundled example varieties.

use crate::error::CliError;
use crate::spec::{parse_variety, VarietySpec};

pub const FIXTURES: &[(&str, &str)] = &[
    ("p1_o1", include_str!("../fixtures/p1_o1.json")),
    ("p1_o2", include_str!("../fixtures/p1_o2.json")),
    ("p2_o1", include_str!("../fixtures/p2_o1.json")),
    ("p2_o2", include_str!("../fixtures/p2_o2.json")),
    ("p1xp1_o11", include_str!("../fixtures/p1xp1_o11.json")),
    ("hirzebruch1_fiber", include_str!("../fixtures/hirzebruch1_fiber.json")),
    ("p2_antiample", include_str!("../fixtures/p2_antiample.json")),
];

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|(n, _)| *n).collect()
}

pub fn fixture_text(name: &str) -> Result<&'static str, CliError> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| CliError::UnknownFixture(name.to_string()))
}

pub fn fixture(name: &str) -> Result<VarietySpec, CliError> {
    parse_variety(fixture_text(name)?)
}
