//! Run records: deterministic JSON results plus CSV tables. Timings are
//! written to a separate file so the result JSON stays byte-identical
//! across reruns with the same config and seed.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub const RECORD_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRecord {
    pub id: String,
    pub pass: bool,
    /// Named scalar outcomes, ordered deterministically.
    pub metrics: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Curve {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteRecord {
    pub name: String,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<Curve>,
}

impl SuiteRecord {
    pub fn new(name: impl Into<String>, checks: Vec<CheckRecord>, curves: Vec<Curve>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        SuiteRecord { name: name.into(), pass, checks, curves }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub schema_version: u32,
    pub config_hash: String,
    pub seed: u64,
    pub suites: Vec<SuiteRecord>,
    pub pass: bool,
}

impl RunRecord {
    pub fn new(config_hash: String, seed: u64, suites: Vec<SuiteRecord>) -> Self {
        let pass = suites.iter().all(|s| s.pass);
        RunRecord { schema_version: RECORD_SCHEMA_VERSION, config_hash, seed, suites, pass }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serialization cannot fail")
    }

    pub fn from_json(s: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Write results.json plus one CSV per suite into the directory.
    pub fn write_to(&self, dir: &Path) -> anyhow::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("results.json"), self.to_json())?;
        for suite in &self.suites {
            let mut file = std::fs::File::create(dir.join(format!("{}.csv", suite.name)))?;
            writeln!(file, "{}", suite.to_csv().trim_end())?;
        }
        Ok(())
    }
}

impl SuiteRecord {
    /// CSV with one row per check; the metric columns are the sorted union
    /// of all metric names.
    pub fn to_csv(&self) -> String {
        let mut columns: Vec<String> = Vec::new();
        for c in &self.checks {
            for key in c.metrics.keys() {
                if !columns.contains(key) {
                    columns.push(key.clone());
                }
            }
        }
        columns.sort();
        let mut out = String::from("check,pass");
        for c in &columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for c in &self.checks {
            out.push_str(&c.id);
            out.push(',');
            out.push_str(if c.pass { "true" } else { "false" });
            for col in &columns {
                out.push(',');
                if let Some(v) = c.metrics.get(col) {
                    out.push_str(&format!("{v:.12e}"));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Wall-clock timings, written separately from the deterministic record.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Timings {
    pub suite_millis: BTreeMap<String, u128>,
}

impl Timings {
    pub fn write_to(&self, dir: &Path) -> anyhow::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("timings.json"), serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

/// Convenience constructor for metric maps.
pub fn metrics<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
