//! Output files: JSON reports and CSV tables, both carrying a run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

/// What produced a file: command, effective configuration, seed and tolerances.
///
/// Deliberately excludes the thread count and timings so that reruns compare
/// byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub tolerances: BTreeMap<String, f64>,
}

impl Manifest {
    pub fn new(command: &str, seed: u64) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            config: BTreeMap::new(),
            tolerances: BTreeMap::new(),
        }
    }

    pub fn with_config<'a>(mut self, entries: impl IntoIterator<Item = (&'a String, &'a String)>) -> Self {
        self.config.extend(entries.into_iter().map(|(k, v)| (k.clone(), v.clone())));
        self
    }

    pub fn tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.into(), value);
        self
    }

    /// `# key: value` comment lines for CSV files.
    pub fn csv_header(&self) -> String {
        let mut out = format!("# tool: {} {}\n# command: {}\n# seed: {}\n", self.tool, self.version, self.command, self.seed);
        for (k, v) in &self.config {
            out.push_str(&format!("# config.{k}: {v}\n"));
        }
        for (k, v) in &self.tolerances {
            out.push_str(&format!("# tolerance.{k}: {v:e}\n"));
        }
        out
    }
}

/// `{"manifest": …, "report": …}`, pretty-printed.
pub fn json_report<T: Serialize>(manifest: &Manifest, report: &T) -> Result<String> {
    let doc = serde_json::json!({ "manifest": manifest, "report": report });
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| crate::Error::arg(format!("serializing report: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn write_json<T: Serialize>(path: &Path, manifest: &Manifest, report: &T) -> Result<()> {
    write(path, &json_report(manifest, report)?)
}

pub fn write_csv(path: &Path, manifest: &Manifest, csv: &str) -> Result<()> {
    write(path, &(manifest.csv_header() + csv))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

/// Parses a JSON report written by [`write_json`].
pub fn read_json(path: &Path) -> Result<(Manifest, Value)> {
    let text = fs::read_to_string(path)?;
    let bad = |e: String| crate::Error::arg(format!("{}: {e}", path.display()));
    let mut doc: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let manifest = serde_json::from_value(doc["manifest"].take()).map_err(|e| bad(e.to_string()))?;
    Ok((manifest, doc["report"].take()))
}

/// Splits a CSV written by [`write_csv`] into manifest lines and data rows.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path)?;
    let (comments, rows): (Vec<&str>, Vec<&str>) = text.lines().partition(|l| l.starts_with('#'));
    Ok((
        comments.into_iter().map(String::from).collect(),
        rows.into_iter().map(|r| r.split(',').map(String::from).collect()).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a/b.csv");
        let m = Manifest::new("psi", 7).tolerance("margin", 1e-9);
        write_csv(&path, &m, "t,n,psi\n1,2,3\n").unwrap();
        let (comments, rows) = read_csv(&path).unwrap();
        assert!(comments.iter().any(|c| c == "# seed: 7"));
        assert_eq!(rows, vec![vec!["t", "n", "psi"], vec!["1", "2", "3"]]);
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        let m = Manifest::new("envelope", 1);
        write_json(&path, &m, &serde_json::json!({"verdict": "x"})).unwrap();
        let (back, body) = read_json(&path).unwrap();
        assert_eq!(back, m);
        assert_eq!(body["verdict"], "x");
    }
}
