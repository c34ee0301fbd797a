//! Shipped configuration files.

pub struct Preset {
    pub name: &'static str,
    pub text: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset { name: "fig2-contextual", text: include_str!("../presets/fig2-contextual.toml") },
    Preset { name: "fig2-budget", text: include_str!("../presets/fig2-budget.toml") },
    Preset { name: "fig2-eta", text: include_str!("../presets/fig2-eta.toml") },
    Preset { name: "fig3-noncontextual", text: include_str!("../presets/fig3-noncontextual.toml") },
    Preset { name: "fig3-known", text: include_str!("../presets/fig3-known.toml") },
    Preset { name: "fig3-40trials", text: include_str!("../presets/fig3-40trials.toml") },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

impl Preset {
    /// First comment line of the file.
    pub fn description(&self) -> &'static str {
        self.text.lines().next().and_then(|l| l.strip_prefix("# ")).unwrap_or("")
    }
}
