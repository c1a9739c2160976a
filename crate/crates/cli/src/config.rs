//! `key = value` configuration files. Command-line flags take precedence.

use std::path::{Path, PathBuf};

use crate::error::CliError;
use crate::table::Format;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub anisotropy: Option<f64>,
    pub field: Option<f64>,
    pub mu: Option<f64>,
    pub hbar: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

pub const KEYS: &str = "A, B, mu, hbar, seed, format, out";

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Usage(msg) => CliError::Usage(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Blank lines and lines starting with `#` are ignored; keys are case-sensitive.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = FileConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| CliError::Usage(format!("line {}: {msg}", lineno + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let float = || value.parse::<f64>().map_err(|_| bad(format!("`{key}` expects a number, got `{value}`")));
            match key {
                "A" => cfg.anisotropy = Some(float()?),
                "B" => cfg.field = Some(float()?),
                "mu" => cfg.mu = Some(float()?),
                "hbar" => cfg.hbar = Some(float()?),
                "seed" => {
                    cfg.seed = Some(value.parse().map_err(|_| bad(format!("`seed` expects an integer, got `{value}`")))?)
                }
                "format" => {
                    cfg.format = Some(match value {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        _ => return Err(bad(format!("`format` must be csv or json, got `{value}`"))),
                    })
                }
                "out" => cfg.out = Some(PathBuf::from(value)),
                _ => return Err(bad(format!("unknown key `{key}` (known: {KEYS})"))),
            }
        }
        Ok(cfg)
    }
}
