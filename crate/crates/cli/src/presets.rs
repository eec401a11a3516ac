//! Bundled scenario and sweep presets.

use std::path::Path;

use crate::config::{load_config, parse_config, LoadedConfig};
use crate::error::CliError;

pub const PRESETS: &[(&str, &str)] = &[
    ("slow_robot_state", include_str!("../presets/slow_robot_state.toml")),
    ("slow_velocity_feedback", include_str!("../presets/slow_velocity_feedback.toml")),
    ("medium_robot_state", include_str!("../presets/medium_robot_state.toml")),
    ("medium_velocity_feedback", include_str!("../presets/medium_velocity_feedback.toml")),
    ("fast_robot_state", include_str!("../presets/fast_robot_state.toml")),
    ("fast_velocity_feedback", include_str!("../presets/fast_velocity_feedback.toml")),
    ("speed_sweep", include_str!("../presets/speed_sweep.toml")),
];

pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Resolves a CLI config argument: an existing path wins, otherwise a
/// preset name.
pub fn resolve_config(arg: &str) -> Result<LoadedConfig, CliError> {
    let path = Path::new(arg);
    if path.exists() {
        load_config(path)
    } else if let Some(text) = preset_text(arg) {
        parse_config(text, &format!("preset '{arg}'"))
    } else {
        Err(CliError::UnknownConfig(arg.to_string()))
    }
}

pub fn list() -> String {
    let mut out = String::from("bundled presets:\n");
    for (name, text) in PRESETS {
        let kind = if text.contains("[sweep]") { "sweep" } else { "scenario" };
        out.push_str(&format!("  {name:<28} {kind}\n"));
    }
    out
}
