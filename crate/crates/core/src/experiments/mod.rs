//! Experiment configs, reports and the catalog of runnable suites.
//!
//! A config names an experiment, optionally carries an [`Instance`] and a
//! free-form parameter object, and fixes a seed:
//!
//! ```json
//! {"experiment": "spectral",
//!  "instance": {"chain": {"kind": "flip"}, "map": {"kind": "real", "values": [0, 1]}},
//!  "params": {"t": [1]},
//!  "seed": 7}
//! ```

pub mod criteria;
pub mod instance;
pub mod random;
mod suites;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
pub use instance::{ChainProblem, ChainSpec, GraphSpec, Instance, MapSpec, SpaceSpec, TreeSpec};

/// One experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<Instance>,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub seed: u64,
    /// Output directory; nothing is written when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> Self {
        ExperimentConfig { experiment: experiment.into(), instance: None, params: Map::new(), seed: 0, out: None }
    }

    pub fn with_instance(mut self, instance: Instance) -> Self {
        self.instance = Some(instance);
        self
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

pub type Row = Map<String, Value>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub version: &'static str,
    /// Wall time of the run; the only field that changes between runs.
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub experiment: String,
    pub pass: bool,
    pub summary: String,
    pub rows: Vec<Row>,
    /// Additional CSV tables, written as `<experiment>_<name>.csv`.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tables: BTreeMap<String, Vec<Row>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub config: ExperimentConfig,
    pub provenance: Provenance,
}

/// What a suite hands back before provenance is attached.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub pass: bool,
    pub summary: String,
    pub rows: Vec<Row>,
    pub tables: BTreeMap<String, Vec<Row>>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The report as JSON without the wall-time field.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v["provenance"].as_object_mut().expect("provenance object").remove("wall_seconds");
        serde_json::to_string_pretty(&v).expect("reports serialize")
    }

    /// Write `<experiment>.json`, `<experiment>.csv` and any extra tables
    /// into `dir`; returns the written paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let json = dir.join(format!("{}.json", self.experiment));
        fs::write(&json, self.to_json() + "\n")?;
        written.push(json);
        let csv = dir.join(format!("{}.csv", self.experiment));
        write_csv(&csv, &self.rows)?;
        written.push(csv);
        for (name, rows) in &self.tables {
            let path = dir.join(format!("{}_{name}.csv", self.experiment));
            write_csv(&path, rows)?;
            written.push(path);
        }
        Ok(written)
    }

    /// Process exit code: 0 when every asserted check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Exit code for a failed run: 1 for broken invariants, 2 for bad input.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) | Error::Drift(_) | Error::Io(_) => 1,
        _ => 2,
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        // serde_json prints floats with the shortest round-trip form.
        other => other.to_string(),
    }
}

/// CSV with the union of the row keys (first-seen order) as header.
pub fn write_csv(path: &Path, rows: &[Row]) -> Result<()> {
    let mut header: Vec<&str> = Vec::new();
    for row in rows {
        for k in row.keys() {
            if !header.contains(&k.as_str()) {
                header.push(k);
            }
        }
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&header)?;
    for row in rows {
        w.write_record(header.iter().map(|k| row.get(*k).map(csv_cell).unwrap_or_default()))?;
    }
    w.flush()?;
    Ok(())
}

/// Catalog entry of a suite.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub needs: &'static [&'static str],
    /// Parameter name, default and meaning.
    pub params: Vec<ParamInfo>,
    /// A small config that runs in well under a second.
    pub smoke: ExperimentConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamInfo {
    pub name: &'static str,
    pub default: Value,
    pub doc: &'static str,
}

pub fn list_experiments() -> Vec<ExperimentInfo> {
    suites::catalog()
}

/// Run `config`, writing its outputs when `config.out` is set.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let start = Instant::now();
    let outcome = suites::dispatch(config)?;
    let report = Report {
        experiment: config.experiment.clone(),
        pass: outcome.pass,
        summary: outcome.summary,
        rows: outcome.rows,
        tables: outcome.tables,
        notes: outcome.notes,
        config: config.clone(),
        provenance: Provenance {
            seed: config.seed,
            version: env!("CARGO_PKG_VERSION"),
            wall_seconds: start.elapsed().as_secs_f64(),
        },
    };
    if let Some(dir) = &config.out {
        report.write(dir)?;
    }
    Ok(report)
}
