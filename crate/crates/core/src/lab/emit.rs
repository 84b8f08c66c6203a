//! CSV and JSON serialization of experiment outcomes.

use std::io::Write;
use std::path::Path;

use serde_json::Value;

use super::experiment::{Format, Outcome};
use crate::error::{Error, Result};
use crate::flow::EntropyReport;

pub const REPORT_COLUMNS: &[&str] = &[
    "quantity", "horizon", "count_lo", "count_hi", "slope", "slope_lo", "slope_hi", "r", "a", "R", "exact_flag",
];

fn num(x: f64) -> String {
    if x.is_finite() {
        let v = round12(x);
        if v == v.trunc() && v.abs() < 1e15 {
            format!("{}", v as i64)
        } else {
            format!("{v}")
        }
    } else {
        String::new()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn round12(x: f64) -> f64 {
    let scale = 1e12;
    let r = (x * scale).round() / scale;
    if r.is_finite() { r } else { x }
}

fn csv_writer(out: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// One row per horizon; an empty report gives the header alone.
pub fn report_csv(report: &EntropyReport) -> Result<String> {
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(REPORT_COLUMNS).map_err(csv_err)?;
        let c = &report.config;
        for row in &report.rows {
            w.write_record([
                report.quantity.clone(),
                num(row.horizon),
                num(row.count_lo),
                num(row.count_hi),
                num(report.slope),
                num(report.slope_lo),
                num(report.slope_hi),
                opt(c.r),
                opt(c.a),
                opt(c.anchor_radius),
                row.exact.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))?;
    }
    Ok(String::from_utf8(buf).expect("utf-8"))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::Number(n) => out.push((prefix.to_string(), n.as_f64().map(num).unwrap_or_else(|| n.to_string()))),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
    }
}

pub fn outcome_csv(outcome: &Outcome) -> Result<String> {
    match outcome {
        Outcome::Report(r) => report_csv(r),
        Outcome::Bundle(b) => {
            let mut pairs = Vec::new();
            flatten("", &b.values, &mut pairs);
            let mut buf = Vec::new();
            {
                let mut w = csv_writer(&mut buf);
                w.write_record(["quantity", "key", "value"]).map_err(csv_err)?;
                for (k, v) in pairs {
                    w.write_record([b.quantity.as_str(), &k, &v]).map_err(csv_err)?;
                }
                w.flush().map_err(|e| Error::Io(e.to_string()))?;
            }
            Ok(String::from_utf8(buf).expect("utf-8"))
        }
    }
}

fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, x)| (k, normalize(x))).collect()),
        other => other,
    }
}

/// Pretty JSON with sorted keys, floats rounded to 12 decimals and non-finite values as `null`.
pub fn to_stable_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Io(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&normalize(v)).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn render(outcome: &Outcome, format: Format) -> Result<String> {
    match format {
        Format::Json => to_stable_json(outcome),
        Format::Csv => outcome_csv(outcome),
    }
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    drop(f);
    std::fs::rename(&tmp, path).map_err(io)
}
