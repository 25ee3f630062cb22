//! `--config` files: plain `key = value` lines, `#` comments, blank lines
//! ignored. Keys are the long flag names without dashes, e.g. `symbol-ms`.
//! Explicit flags win over file entries, which win over built-in defaults.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// Every key a config file may set.
pub const KNOWN_KEYS: &[&str] = &[
    "rate",
    "symbol-ms",
    "gap-ms",
    "fade-ms",
    "amp",
    "min-confidence",
    "snr-db",
    "lowpass-hz",
    "gain",
    "seed",
    "window",
    "hop",
    "db-floor",
    "baseline-bps",
];

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|msg| CliError::Data(format!("{}: {msg}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(format!("line {}: unknown key {key:?}", n + 1));
            }
            entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    /// Resolves one setting: flag, then file entry, then `default`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        if let Some(v) = flag {
            return Ok(v);
        }
        self.lookup(key).map(|v| v.unwrap_or(default))
    }

    /// Like [`ConfigFile::resolve`] for settings whose default is "off".
    pub fn resolve_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.lookup(key),
        }
    }

    fn lookup<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        debug_assert!(KNOWN_KEYS.contains(&key), "{key}");
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| CliError::Data(format!("config: invalid value {raw:?} for {key}"))),
        }
    }
}
