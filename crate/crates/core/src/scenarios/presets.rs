use crate::error::{Error, Result};

use super::Scenario;

/// Scenario files compiled into the binary, looked up by name.
const PRESETS: &[(&str, &str)] = &[
    ("eigenstate", include_str!("../../presets/eigenstate.json")),
    ("optical-30-60", include_str!("../../presets/optical-30-60.json")),
    ("optical-weak", include_str!("../../presets/optical-weak.json")),
    ("ritchie", include_str!("../../presets/ritchie.json")),
    ("ritchie-expr", include_str!("../../presets/ritchie-expr.json")),
    ("spin-imaginary", include_str!("../../presets/spin-imaginary.json")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(name, _)| *name)
}

pub fn preset_source(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, src)| *src)
}

pub fn preset(name: &str) -> Result<Scenario> {
    let src = preset_source(name).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown preset `{name}` (available: {})",
            preset_names().collect::<Vec<_>>().join(", ")
        ))
    })?;
    Scenario::from_json(src)
}
