//! Built-in sweep presets compiled into the binary. The TOML sources live in `presets/`.

use crate::config::{parse_config, SweepConfig};
use crate::error::{Result, SimError};

pub const PRESETS: [(&str, &str); 10] = [
    ("fig2", include_str!("../presets/fig2.toml")),
    ("fig3", include_str!("../presets/fig3.toml")),
    ("fig3b", include_str!("../presets/fig3b.toml")),
    ("fig4", include_str!("../presets/fig4.toml")),
    ("fig4b", include_str!("../presets/fig4b.toml")),
    ("fig5a", include_str!("../presets/fig5a.toml")),
    ("fig5b", include_str!("../presets/fig5b.toml")),
    ("fig5c", include_str!("../presets/fig5c.toml")),
    ("fig5d", include_str!("../presets/fig5d.toml")),
    ("fig6", include_str!("../presets/fig6.toml")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(name, _)| *name)
}

pub fn preset_source(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, src)| *src)
}

pub fn preset(name: &str) -> Result<SweepConfig> {
    let src = preset_source(name).ok_or_else(|| SimError::UnknownPreset(name.to_string()))?;
    parse_config(src, &format!("preset {name}"))
}
