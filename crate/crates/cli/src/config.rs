//! TOML configuration. Every key is optional; command-line flags win.
//!
//! ```toml
//! [metrics]
//! char_width = 8
//! line_height = 16
//!
//! [layout]
//! algo = "l1s"
//! padding = 2
//! simplify = true
//!
//! [linebreak]
//! ideal_width = 480
//! target_width = 480
//! stretch = 0.5
//! shrink = 0.33
//!
//! [render]
//! palette = ["#4e79a7", "#f28e2b"]
//! corner_radius = 3
//! style = "wraps.css"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub metrics: MetricsSection,
    #[serde(default)]
    pub layout: LayoutSection,
    #[serde(default)]
    pub linebreak: LinebreakSection,
    #[serde(default)]
    pub render: RenderSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsSection {
    pub char_width: Option<f64>,
    pub line_height: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutSection {
    pub algo: Option<String>,
    pub padding: Option<f64>,
    pub simplify: Option<bool>,
    pub grouped: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinebreakSection {
    pub ideal_width: Option<f64>,
    pub target_width: Option<f64>,
    pub stretch: Option<f64>,
    pub shrink: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderSection {
    pub palette: Option<Vec<String>>,
    pub corner_radius: Option<f64>,
    /// Relative paths resolve against the config file's directory.
    pub style: Option<PathBuf>,
}

impl Config {
    pub fn load(path: &Path) -> anyhow::Result<Config> {
        let text = std::fs::read_to_string(path)?;
        let mut c: Config = toml::from_str(&text)?;
        if let Some(s) = &c.render.style {
            if s.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                c.render.style = Some(base.join(s));
            }
        }
        Ok(c)
    }
}
