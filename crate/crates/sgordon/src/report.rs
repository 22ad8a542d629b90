//! Deterministic report emission.
//!
//! Two runs with the same configuration must produce byte-identical files:
//! floats print with 17 significant digits in CSV (`{:.16e}`), JSON uses
//! serde's shortest round-trip rendering with stable field order, and row
//! order follows the input grids regardless of execution order.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// 17-significant-digit scientific rendering; round-trips every f64.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.16e}")
    }
}

/// A rectangular report: header plus rows, rendered as CSV or JSON.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&csv_line(&self.header));
        for row in &self.rows {
            out.push_str(&csv_line(row));
        }
        out
    }

    /// JSON array of objects, fields in header order (serde_json sorts map
    /// keys, so objects are emitted directly).
    pub fn to_json(&self) -> String {
        let mut out = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            out.push_str("  {");
            for (j, (key, value)) in self.header.iter().zip(row).enumerate() {
                out.push_str(if j == 0 { "\n" } else { ",\n" });
                out.push_str("    ");
                out.push_str(&json_string(key));
                out.push_str(": ");
                out.push_str(&json_cell(value));
            }
            out.push_str("\n  }");
        }
        out.push_str("\n]");
        out
    }
}

/// Numeric-looking cells become JSON numbers (17 significant digits,
/// round-trip exact), booleans stay booleans, the rest become strings.
fn json_cell(value: &str) -> String {
    match value {
        "true" | "false" => return value.to_string(),
        "inf" | "-inf" | "nan" => return json_string(value),
        _ => {}
    }
    if value.parse::<f64>().is_ok() {
        return value.to_string();
    }
    json_string(value)
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string render")
}

fn csv_line(fields: &[String]) -> String {
    let mut line = String::new();
    for (k, f) in fields.iter().enumerate() {
        if k > 0 {
            line.push(',');
        }
        if f.contains(',') || f.contains('"') || f.contains('\n') {
            line.push('"');
            line.push_str(&f.replace('"', "\"\""));
            line.push('"');
        } else {
            line.push_str(f);
        }
    }
    line.push('\n');
    line
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Config(format!("unknown report format '{other}'"))),
        }
    }
}

/// Render and write the table; `path` of None writes to stdout.
pub fn write_table(table: &Table, format: ReportFormat, path: Option<&Path>) -> Result<()> {
    let body = match format {
        ReportFormat::Csv => table.to_csv(),
        ReportFormat::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
    };
    match path {
        Some(p) => std::fs::write(p, body)
            .map_err(|e| Error::Io(format!("cannot write report {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Error::Io(format!("cannot write report to stdout: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting_and_float_format() {
        let mut t = Table::new(&["name", "value"]);
        t.push(vec!["plain".into(), fmt_f64(1.0)]);
        t.push(vec!["com,ma \"q\"".into(), fmt_f64(f64::INFINITY)]);
        let csv = t.to_csv();
        assert_eq!(
            csv,
            "name,value\nplain,1.0000000000000000e0\n\"com,ma \"\"q\"\"\",inf\n"
        );
    }

    #[test]
    fn float_format_round_trips() {
        for x in [std::f64::consts::PI, 1.0 / 3.0, -2.2250738585072014e-308] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn json_field_order_is_stable() {
        let mut t = Table::new(&["b", "a"]);
        t.push(vec![fmt_f64(2.0), "text".into()]);
        let json = t.to_json();
        let b_pos = json.find("\"b\"").unwrap();
        let a_pos = json.find("\"a\"").unwrap();
        assert!(b_pos < a_pos);
    }
}
