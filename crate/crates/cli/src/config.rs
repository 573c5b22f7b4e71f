use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rgs_core::netsim::ChainConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    /// One JSON object per trial.
    #[default]
    LineRecords,
    /// Tab-separated columns with a header row.
    Table,
}

fn default_trials() -> u64 {
    1000
}

fn default_workers() -> usize {
    1
}

fn default_out() -> PathBuf {
    PathBuf::from("rgs-out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Directory receiving the record and summary files.
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
}

impl Default for RunSection {
    fn default() -> Self {
        Self { trials: default_trials(), workers: default_workers(), out: default_out(), format: OutputFormat::default() }
    }
}

/// Contents of a run file: a `[chain]` table and an optional `[run]` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub chain: ChainConfig,
    #[serde(default)]
    pub run: RunSection,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.chain.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if self.run.trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        if self.run.workers == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }
}
