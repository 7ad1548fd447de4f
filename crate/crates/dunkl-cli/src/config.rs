//! Plain-text key-value run configuration with flag overrides.
//!
//! A config file holds `key = value` lines ('#' starts a comment). Flags win
//! over file values. Every resolved parameter is recorded and embedded in
//! the output header, so a run can be reproduced from its artifact alone.

use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    map: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(CliError::Io)?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                )));
            };
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(FileConfig { map })
    }

    /// Reject keys outside the command's vocabulary.
    pub fn validate_keys(&self, allowed: &[&str]) -> Result<(), CliError> {
        for key in self.map.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Config(format!(
                    "unknown config key `{key}` (allowed: {})",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }
}

/// Resolves each parameter from flag → file → default, recording the value.
pub struct Resolver {
    file: FileConfig,
    pub resolved: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(file: FileConfig) -> Resolver {
        Resolver {
            file,
            resolved: BTreeMap::new(),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.file.map.get(key).map(|s| s.as_str())
    }

    pub fn f64(&mut self, key: &str, flag: Option<f64>, default: f64) -> Result<f64, CliError> {
        let v = match flag {
            Some(v) => v,
            None => match self.raw(key) {
                Some(s) => s
                    .parse()
                    .map_err(|_| CliError::Config(format!("key `{key}`: not a number: `{s}`")))?,
                None => default,
            },
        };
        self.resolved.insert(key.to_string(), format!("{v}"));
        Ok(v)
    }

    pub fn u64(&mut self, key: &str, flag: Option<u64>, default: u64) -> Result<u64, CliError> {
        let v = match flag {
            Some(v) => v,
            None => match self.raw(key) {
                Some(s) => s
                    .parse()
                    .map_err(|_| CliError::Config(format!("key `{key}`: not an integer: `{s}`")))?,
                None => default,
            },
        };
        self.resolved.insert(key.to_string(), format!("{v}"));
        Ok(v)
    }

    pub fn usize(&mut self, key: &str, flag: Option<usize>, default: usize) -> Result<usize, CliError> {
        Ok(self.u64(key, flag.map(|v| v as u64), default as u64)? as usize)
    }

    pub fn string(&mut self, key: &str, flag: Option<String>, default: &str) -> String {
        let v = flag
            .or_else(|| self.raw(key).map(|s| s.to_string()))
            .unwrap_or_else(|| default.to_string());
        self.resolved.insert(key.to_string(), v.clone());
        v
    }

    pub fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        self.resolved.insert(key.to_string(), format!("{value}"));
    }
}
