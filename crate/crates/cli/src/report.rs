//! Tabular results and their CSV/JSON encodings.
//!
//! Every float is rounded to 9 significant digits when it enters a report, so
//! the CSV cell, the JSON number and a re-read JSON value all agree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SIG_DIGITS: usize = 9;

/// Formats `x` with 9 significant digits, trailing zeros removed; plain
/// notation for exponents in `-5..9`, scientific otherwise.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `x` rounded to 9 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap()
    } else {
        x
    }
}

/// A float cell. Non-finite values become JSON `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    /// Labelled summary values printed after the table, e.g. `displayed_mass`.
    #[serde(default)]
    pub footer: BTreeMap<String, Value>,
    #[serde(default)]
    pub diagnostics: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report {
            command: command.into(),
            params: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            footer: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.params.insert(key.into(), v.into());
        self
    }

    pub fn diag(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.diagnostics.insert(key.into(), v.into());
        self
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        w.write_record(&self.columns).unwrap();
        for row in &self.rows {
            w.write_record(row.iter().map(cell_text)).unwrap();
        }
        for (k, v) in &self.footer {
            w.write_record([k.clone(), cell_text(v)]).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).unwrap();
        s.push('\n');
        s
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format_sig(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Reads a report emitted by `to_json`. Floats are re-rounded and the table
/// shape is checked, so `parse_report(r.to_json())` re-emits identical bytes.
pub fn parse_report(text: &str) -> Result<Report, String> {
    let mut r: Report = serde_json::from_str(text).map_err(|e| e.to_string())?;
    for (i, row) in r.rows.iter().enumerate() {
        if row.len() != r.columns.len() {
            return Err(format!("row {i} has {} cells, expected {}", row.len(), r.columns.len()));
        }
    }
    let values = r
        .params
        .values_mut()
        .chain(r.rows.iter_mut().flatten())
        .chain(r.footer.values_mut())
        .chain(r.diagnostics.values_mut());
    for v in values {
        normalize(v);
    }
    Ok(r)
}

fn normalize(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => *v = num(n.as_f64().unwrap()),
        Value::Array(items) => items.iter_mut().for_each(normalize),
        Value::Object(map) => map.values_mut().for_each(normalize),
        _ => {}
    }
}
