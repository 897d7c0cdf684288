//! Report records and their JSON and CSV files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::Value;

use crate::HarnessError;

/// Exact rationals are written as `"num/den"`.
pub fn rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// A failed check with the vertices or elements that reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    pub witness: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// Result of one suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    /// Profile that produced the result.
    pub profile: String,
    pub passed: bool,
    /// Set when the run stopped at the vertex budget.
    pub partial: bool,
    pub summary: BTreeMap<String, Value>,
    pub failures: Vec<Failure>,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl Report {
    pub fn new(suite: &str, profile: &str) -> Self {
        Report {
            suite: suite.into(),
            profile: profile.into(),
            passed: true,
            partial: false,
            summary: BTreeMap::new(),
            failures: Vec::new(),
            table: None,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("summary values serialise");
        self.summary.insert(key.into(), v);
    }

    pub fn fail(&mut self, check: &str, witness: Vec<String>, detail: impl Into<String>) {
        self.passed = false;
        self.failures.push(Failure { check: check.into(), witness, detail: detail.into() });
    }

    /// An integer summary entry, zero when absent.
    pub fn count(&self, key: &str) -> u64 {
        self.summary.get(key).and_then(Value::as_u64).unwrap_or(0)
    }

    pub fn number(&self, key: &str) -> Option<f64> {
        self.summary.get(key).and_then(Value::as_f64)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    /// Writes `<suite>.json` and, when there is a table, `<suite>.csv`.
    pub fn write(&self, dir: &Path) -> Result<(), HarnessError> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(format!("{}.json", self.suite)), self.to_json() + "\n")?;
        if let Some(table) = &self.table {
            let mut w = csv::Writer::from_path(dir.join(format!("{}.csv", self.suite)))?;
            w.write_record(&table.headers)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Ok(())
    }
}
