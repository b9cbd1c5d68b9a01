//! Stable report rows. A row is an ordered list of (field, value) string
//! pairs; the CSV and JSONL emitters consume the same pairs, so the two
//! formats always carry identical field values.

use crate::decomp::BoundReport;
use serde_json::{Map, Value};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Row {
    fields: Vec<(String, String)>,
}

impl Row {
    pub fn new() -> Row {
        Row { fields: Vec::new() }
    }

    pub fn push(mut self, field: &str, value: impl ToString) -> Row {
        self.fields.push((field.to_string(), value.to_string()));
        self
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    pub fn value_of(&self, field: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(f, _)| f == field)
            .map(|(_, v)| v.as_str())
    }
}

impl Default for Row {
    fn default() -> Self {
        Row::new()
    }
}

/// The documented bound-report schema, one row per (instance, alpha, r).
pub fn bound_report_row(rep: &BoundReport) -> Row {
    Row::new()
        .push("m", rep.m)
        .push("r", rep.r)
        .push("alpha", rep.alpha)
        .push("circuits_observed", rep.circuits_observed)
        .push("signatures_observed", rep.signatures_observed)
        .push("bound_9m", &rep.bound_9m)
        .push("bound_class", &rep.bound_class)
        .push("pass", rep.pass)
}

/// CSV with a header line; fields never contain commas by construction
/// (label lists are space-separated).
pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::new();
    if let Some(first) = rows.first() {
        let header: Vec<&str> = first.fields().iter().map(|(f, _)| f.as_str()).collect();
        out.push_str(&header.join(","));
        out.push('\n');
    }
    for row in rows {
        let vals: Vec<&str> = row.fields().iter().map(|(_, v)| v.as_str()).collect();
        out.push_str(&vals.join(","));
        out.push('\n');
    }
    out
}

/// JSON lines, one object per row, fields in row order with string values
/// identical to the CSV emission.
pub fn to_jsonl(rows: &[Row]) -> String {
    let mut out = String::new();
    for row in rows {
        let mut obj = Map::new();
        for (f, v) in row.fields() {
            obj.insert(f.clone(), Value::String(v.clone()));
        }
        out.push_str(&Value::Object(obj).to_string());
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReportFormat {
    Csv,
    Jsonl,
}

impl ReportFormat {
    pub fn emit(&self, rows: &[Row]) -> String {
        match self {
            ReportFormat::Csv => to_csv(rows),
            ReportFormat::Jsonl => to_jsonl(rows),
        }
    }
}
