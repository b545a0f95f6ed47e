//! Run reports and CSV tables.

use crate::config::{RunConfig, VERSION};
use crate::CliError;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Computed in this run.
    Measured,
    /// A constant supplied by configuration.
    Configured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    /// Decides the exit code.
    Invariant,
    /// Reported only.
    Expectation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub kind: VerdictKind,
    pub passed: bool,
    pub value: f64,
    /// Threshold `value` was compared against, if any.
    pub tolerance: Option<f64>,
    pub provenance: Provenance,
}

impl Verdict {
    /// Invariant `value ≤ tolerance`.
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Verdict {
            name: name.into(),
            kind: VerdictKind::Invariant,
            passed: value <= tolerance,
            value,
            tolerance: Some(tolerance),
            provenance: Provenance::Measured,
        }
    }

    /// Invariant `value ≥ tolerance`.
    pub fn at_least(name: &str, value: f64, tolerance: f64) -> Self {
        Verdict {
            passed: value >= tolerance,
            ..Verdict::at_most(name, value, tolerance)
        }
    }

    /// Invariant given as a boolean; `value` is 1 for true.
    pub fn holds(name: &str, ok: bool) -> Self {
        Verdict {
            name: name.into(),
            kind: VerdictKind::Invariant,
            passed: ok,
            value: if ok { 1.0 } else { 0.0 },
            tolerance: None,
            provenance: Provenance::Measured,
        }
    }

    pub fn expectation(mut self) -> Self {
        self.kind = VerdictKind::Expectation;
        self
    }

    pub fn configured(mut self) -> Self {
        self.provenance = Provenance::Configured;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub version: String,
    pub results: serde_json::Value,
    /// Wall-clock seconds per stage.
    pub timings: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<String>,
}

impl RunReport {
    pub fn new(config: &RunConfig) -> Self {
        RunReport {
            config: config.clone(),
            version: VERSION.into(),
            results: serde_json::Value::Null,
            timings: BTreeMap::new(),
            verdicts: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdicts
            .iter()
            .all(|v| v.passed || v.kind == VerdictKind::Expectation)
    }

    pub fn failures(&self) -> Vec<&Verdict> {
        self.verdicts
            .iter()
            .filter(|v| !v.passed && v.kind == VerdictKind::Invariant)
            .collect()
    }
}

/// A CSV table with a fixed header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(CliError::internal)?;
        for r in &self.rows {
            w.write_record(r).map_err(CliError::internal)?;
        }
        let bytes = w.into_inner().map_err(CliError::internal)?;
        String::from_utf8(bytes).map_err(CliError::internal)
    }
}

/// Fixed-format float for tables, so identical values give identical bytes.
pub fn num(x: f64) -> String {
    format!("{x:.12e}")
}

pub struct Outcome {
    pub report: RunReport,
    pub tables: Vec<Table>,
}

impl Outcome {
    /// Write `report.json` and every table into `dir`; returns the paths.
    pub fn write(&mut self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", dir.display())))?;
        self.report.tables = self.tables.iter().map(Table::file_name).collect();
        let mut paths = Vec::new();
        for t in &self.tables {
            let p = dir.join(t.file_name());
            std::fs::write(&p, t.to_csv()?).map_err(CliError::internal)?;
            paths.push(p);
        }
        let p = dir.join("report.json");
        let text = serde_json::to_string_pretty(&self.report).map_err(CliError::internal)?;
        std::fs::write(&p, text).map_err(CliError::internal)?;
        paths.push(p);
        Ok(paths)
    }
}
