//! Optional key = value settings file.
//!
//! Precedence is command-line flag, then file, then built-in default.

use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub shots: Option<u32>,
    pub m: Option<u32>,
    pub max_steps: Option<usize>,
    pub cycle_length: Option<usize>,
    pub tolerance_floor: Option<f64>,
    pub z_sigma: Option<f64>,
    pub sessions: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}
