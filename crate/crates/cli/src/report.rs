use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// The check met its expectation.
    Pass,
    /// The check contradicts its expectation.
    Fail,
    /// An expectation-tagged check could not be run.
    Error,
    /// No expectation attached.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: String,
    pub p: Option<u32>,
    pub status: Status,
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproduce: Option<String>,
    pub detail: Value,
}

impl Record {
    pub fn new(check: impl Into<String>, p: Option<u32>, detail: Value) -> Self {
        Record {
            check: check.into(),
            p,
            status: Status::Info,
            expected: None,
            reproduce: None,
            detail,
        }
    }

    /// Attach an expectation; a failure records how to rerun the check.
    pub fn expect(mut self, expected: impl Into<String>, ok: bool, reproduce: impl FnOnce() -> String) -> Self {
        self.expected = Some(expected.into());
        self.status = if ok { Status::Pass } else { Status::Fail };
        if !ok {
            self.reproduce = Some(reproduce());
        }
        self
    }

    pub fn error(
        check: impl Into<String>,
        p: Option<u32>,
        expected: impl Into<String>,
        err: impl ToString,
        reproduce: String,
    ) -> Self {
        Record {
            check: check.into(),
            p,
            status: Status::Error,
            expected: Some(expected.into()),
            reproduce: Some(reproduce),
            detail: serde_json::json!({ "error": err.to_string() }),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub info: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, config: Value, records: Vec<Record>) -> Self {
        let mut summary = Summary {
            checks: records.len(),
            ..Summary::default()
        };
        for r in &records {
            match r.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Error => summary.errors += 1,
                Status::Info => summary.info += 1,
            }
        }
        Report {
            schema: SCHEMA,
            tool: "finpolylog",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config,
            records,
            summary,
        }
    }

    pub fn ok(&self) -> bool {
        self.summary.failed == 0 && self.summary.errors == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per record; detail fields become columns (nested values as
    /// JSON text).
    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut keys = BTreeSet::new();
        for r in &self.records {
            if let Value::Object(m) = &r.detail {
                keys.extend(m.keys().cloned());
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["check", "p", "status", "expected", "reproduce"];
        header.extend(keys.iter().map(String::as_str));
        w.write_record(&header)?;
        let empty = Map::new();
        for r in &self.records {
            let detail = r.detail.as_object().unwrap_or(&empty);
            let status = serde_json::to_value(r.status)?;
            let mut row = vec![
                r.check.clone(),
                r.p.map(|p| p.to_string()).unwrap_or_default(),
                status.as_str().unwrap_or_default().to_string(),
                r.expected.clone().unwrap_or_default(),
                r.reproduce.clone().unwrap_or_default(),
            ];
            row.extend(keys.iter().map(|k| match detail.get(k) {
                None | Some(Value::Null) => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(v) => v.to_string(),
            }));
            w.write_record(&row)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}
