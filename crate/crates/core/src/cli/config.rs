use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// Plain-text `key = value` settings; `#` starts a comment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentConfig {
    pub entries: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::arg(format!("config line {}: expected key = value", i + 1)))?;
            let key = k.trim().replace('_', "-");
            if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(Error::arg(format!("config line {}: duplicate key {key}", i + 1)));
            }
        }
        Ok(ExperimentConfig { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Effective settings of one command: flags, overridden by the config file.
///
/// Every value read is recorded so that the manifest lists the defaults that
/// were actually used.
#[derive(Debug, Clone)]
pub struct Settings {
    known: Vec<String>,
    given: BTreeMap<String, String>,
    pub used: BTreeMap<String, String>,
}

impl Settings {
    /// `args` is a flat struct of optional flags serialized with kebab-case names.
    pub fn new<A: Serialize>(args: &A, config: Option<&ExperimentConfig>) -> Result<Self> {
        let Value::Object(map) = serde_json::to_value(args).map_err(|e| Error::arg(e.to_string()))? else {
            return Err(Error::arg("flags must serialize to a map"));
        };
        let known: Vec<String> = map.keys().cloned().collect();
        let mut given = BTreeMap::new();
        for (k, v) in map {
            match v {
                Value::Null => {}
                Value::String(s) => {
                    given.insert(k, s);
                }
                other => {
                    given.insert(k, other.to_string());
                }
            }
        }
        if let Some(cfg) = config {
            for (k, v) in &cfg.entries {
                if !known.contains(k) {
                    return Err(Error::arg(format!("unknown config key {k:?}; known keys: {}", known.join(", "))));
                }
                given.insert(k.clone(), v.clone());
            }
        }
        Ok(Settings { known, given, used: BTreeMap::new() })
    }

    fn raw(&mut self, key: &str, default: Option<&str>) -> Result<Option<String>> {
        debug_assert!(self.known.iter().any(|k| k == key), "undeclared key {key}");
        let v = self.given.get(key).cloned().or(default.map(String::from));
        if let Some(v) = &v {
            self.used.insert(key.into(), v.clone());
        }
        Ok(v)
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.given.contains_key(key)
    }

    pub fn string(&mut self, key: &str, default: &str) -> Result<String> {
        Ok(self.raw(key, Some(default))?.unwrap_or_default())
    }

    pub fn required(&mut self, key: &str) -> Result<String> {
        self.raw(key, None)?.ok_or_else(|| Error::arg(format!("missing --{key}")))
    }

    pub fn optional(&mut self, key: &str) -> Result<Option<String>> {
        self.raw(key, None)
    }

    pub fn parse<T: FromStr>(&mut self, key: &str, default: &str) -> Result<T>
    where
        T::Err: Display,
    {
        let v = self.string(key, default)?;
        v.parse().map_err(|e| Error::arg(format!("--{key} {v:?}: {e}")))
    }

    pub fn usize_in(&mut self, key: &str, default: usize, lo: usize, hi: usize) -> Result<usize> {
        let v: usize = self.parse(key, &default.to_string())?;
        if v < lo || v > hi {
            return Err(Error::arg(format!("--{key} {v} must lie in {lo}..={hi}")));
        }
        Ok(v)
    }

    /// `f64` in the open interval `(lo, hi)`, or the closed one when `closed`.
    pub fn f64_in(&mut self, key: &str, default: &str, lo: f64, hi: f64, closed: bool) -> Result<f64> {
        let v: f64 = self.parse(key, default)?;
        let ok = if closed { lo <= v && v <= hi } else { lo < v && v < hi };
        if !ok {
            let (l, r) = if closed { ('[', ']') } else { ('(', ')') };
            return Err(Error::arg(format!("--{key} {v} must lie in {l}{lo}, {hi}{r}")));
        }
        Ok(v)
    }
}
