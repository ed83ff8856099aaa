//! Parameter resolution: command-line flag, then config file, then default.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
/// Keys are normalized so that `t-hi` and `t_hi` are the same.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("config line {}: expected key=value, got {raw:?}", no + 1)))?;
        let key = normalize(k);
        if key.is_empty() {
            return Err(CliError::Validation(format!("config line {}: empty key", no + 1)));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::Validation(format!("config line {}: duplicate key {key}", no + 1)));
        }
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Flag,
    Config,
    Default,
}

/// Resolves parameters and records every resolved value with its source.
#[derive(Debug, Default)]
pub struct Resolver {
    config: BTreeMap<String, String>,
    consumed: BTreeSet<String>,
    resolved: BTreeMap<String, (Value, Source)>,
}

impl Resolver {
    pub fn new(config: BTreeMap<String, String>) -> Self {
        Resolver { config, ..Default::default() }
    }

    fn config_value<T>(&mut self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        let Some(raw) = self.config.get(key) else { return Ok(None) };
        self.consumed.insert(key.to_string());
        raw.parse()
            .map(Some)
            .map_err(|e| CliError::Validation(format!("config value {key} = {raw:?}: {e}")))
    }

    fn record<T: Serialize>(&mut self, key: &str, value: &T, source: Source) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.resolved.insert(key.to_string(), (v, source));
    }

    pub fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr + Serialize,
        T::Err: Display,
    {
        Ok(self.get_opt(key, flag)?.unwrap_or_else(|| {
            self.record(key, &default, Source::Default);
            default
        }))
    }

    /// Like [`Resolver::get`] for parameters with no default.
    pub fn get_opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + Serialize,
        T::Err: Display,
    {
        if let Some(v) = flag {
            self.consumed.insert(key.to_string());
            self.record(key, &v, Source::Flag);
            return Ok(Some(v));
        }
        if let Some(v) = self.config_value::<T>(key)? {
            self.record(key, &v, Source::Config);
            return Ok(Some(v));
        }
        Ok(None)
    }

    pub fn require<T>(&mut self, key: &str, flag: Option<T>) -> Result<T, CliError>
    where
        T: FromStr + Serialize,
        T::Err: Display,
    {
        self.get_opt(key, flag)?
            .ok_or_else(|| CliError::Validation(format!("missing required parameter {key}")))
    }

    /// Config keys that no parameter asked for.
    pub fn unused_keys(&self) -> Vec<String> {
        self.config.keys().filter(|k| !self.consumed.contains(*k)).cloned().collect()
    }

    pub fn into_metadata(self) -> Value {
        let mut params = serde_json::Map::new();
        for (k, (v, source)) in self.resolved {
            params.insert(k, serde_json::json!({ "value": v, "source": source }));
        }
        Value::Object(params)
    }
}
