//! Experiment presets shipped as TOML files under `presets/`.

use crate::error::{Error, Result};
use crate::experiment::config::ConfigFile;

pub const PRESETS: [(&str, &str); 5] = [
    ("fig3", include_str!("../../presets/fig3.toml")),
    ("fig4", include_str!("../../presets/fig4.toml")),
    ("fig6", include_str!("../../presets/fig6.toml")),
    ("table1", include_str!("../../presets/table1.toml")),
    ("table2", include_str!("../../presets/table2.toml")),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

pub fn preset_source(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load_preset(name: &str) -> Result<ConfigFile> {
    let text = preset_source(name).ok_or_else(|| {
        Error::Config(format!(
            "unknown preset {name:?}; available: {}",
            preset_names().join(", ")
        ))
    })?;
    ConfigFile::from_toml_str(text)
}
