//! Flat key=value config files mirroring the long flag names.
//!
//! Precedence everywhere: explicit flag > config file > built-in default.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Every key a config file may set; anything else is treated as a typo.
const KNOWN_KEYS: &[&str] = &[
    // global
    "seed",
    "format",
    "verbose",
    // windowing
    "window-duration",
    "window-count",
    "slide",
    "step",
    "align",
    "strict",
    // detector
    "metric",
    "kl-pseudocount",
    "alpha",
    "bootstrap",
    "resample-size",
    "subsample",
    // detect I/O
    "input",
    "output",
    "follow",
    // synth
    "model",
    "n",
    "size-dist",
    "size-mean",
    "size-var",
    "size-std",
    "size-lo",
    "size-hi",
    "p-a",
    "p-b",
    "communities",
    "changes",
    "schedule",
    // bench
    "experiment",
    "grid",
    "events",
    "trials",
    "slack",
    "p-values",
    "out-dir",
];

#[derive(Debug, Default)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn empty() -> Self {
        Config::default()
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `key=value` per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Input(format!(
                    "config line {}: expected key=value, got {line:?}",
                    lineno + 1
                ))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::Input(format!(
                    "config line {}: unknown key {key:?}",
                    lineno + 1
                )));
            }
            values.insert(key.to_string(), value.to_string());
        }
        Ok(Config { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        debug_assert!(KNOWN_KEYS.contains(&key), "lookup of unregistered config key {key}");
        self.values.get(key).map(String::as_str)
    }

    pub fn get_parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(value) => value.parse::<T>().map(Some).map_err(|e| {
                CliError::Input(format!("config key {key}: cannot parse {value:?}: {e}"))
            }),
        }
    }

    /// Missing keys read as false.
    pub fn get_bool(&self, key: &str) -> Result<bool, CliError> {
        match self.raw(key) {
            None => Ok(false),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(value) => Err(CliError::Input(format!(
                "config key {key}: expected a boolean, got {value:?}"
            ))),
        }
    }
}

/// Flag value wins, then config, then the default.
pub fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

pub fn pick_opt<T>(flag: Option<T>, config: Option<T>) -> Option<T> {
    flag.or(config)
}
