use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const CACHE_ENV: &str = "ORTHOFORMS_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub cache_dir: PathBuf,
    pub theta_bound: usize,
    pub window: usize,
    pub node_cap: u64,
    pub workers: usize,
    pub orbit_mode: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cache_dir: PathBuf::from("orthoforms-cache"),
            theta_bound: 20,
            window: 8,
            node_cap: 50_000_000,
            workers: 1,
            orbit_mode: false,
        }
    }
}

impl Config {
    /// Defaults, then the config file, then the environment.
    pub fn load(file: Option<&Path>) -> Result<Self, CliError> {
        let mut cfg = match file {
            Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
            None => Config::default(),
        };
        if let Some(dir) = std::env::var_os(CACHE_ENV) {
            cfg.cache_dir = PathBuf::from(dir);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("theta_bound", self.theta_bound as u64),
            ("window", self.window as u64),
            ("node_cap", self.node_cap),
            ("workers", self.workers as u64),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(CliError::Usage(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}
