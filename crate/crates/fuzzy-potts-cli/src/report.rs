//! Report rendering: a versioned JSON envelope, CSV tables, and plain-text
//! summaries.
//!
//! Every JSON report has the same envelope — `schema`, `command`, `params`,
//! `result` — and every probability or covariance inside it is an object
//! with an `exact` field (the authoritative `a/b` string) and a `decimal`
//! field (a 12-significant-digit rendering computed by exact long
//! division). Reports contain no timestamps, no absolute paths beyond what
//! the caller passed in, and no platform-dependent values, so identical
//! invocations produce byte-identical output.

use fuzzy_potts::rational::{decimal_string, exact_string};
use fuzzy_potts::Rational;
use serde_json::{json, Value};

use crate::CliError;

/// Schema identifier stamped on every JSON report; the matching schema
/// document ships in the repository at `schemas/report.schema.json`.
pub const SCHEMA_ID: &str = "fuzzy-potts-report/1";

/// Significant digits in decimal renderings.
pub const DECIMAL_DIGITS: usize = 12;

/// Output format selected with `--format`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// The versioned JSON envelope (default).
    Json,
    /// A flat table for the commands that produce one.
    Csv,
    /// A short human-readable summary.
    Text,
}

/// Renders a rational as its report object.
pub fn rational_json(r: &Rational) -> Value {
    json!({
        "exact": exact_string(r),
        "decimal": decimal_string(r, DECIMAL_DIGITS),
    })
}

/// Renders a rational for text output: exact first, decimal in parentheses.
pub fn rational_text(r: &Rational) -> String {
    format!("{} (~{})", exact_string(r), decimal_string(r, DECIMAL_DIGITS))
}

/// Wraps a command's parameters and result in the report envelope.
pub fn envelope(command: &str, params: Value, result: Value) -> Value {
    json!({
        "schema": SCHEMA_ID,
        "command": command,
        "params": params,
        "result": result,
    })
}

/// Serializes a JSON report; key order is sorted, output ends in a newline.
pub fn render_json(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    text.push('\n');
    text
}

/// A CSV rendering: one header row plus data rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: Vec<S>) -> CsvTable {
        CsvTable {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: Vec<S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        assert_eq!(
            row.len(),
            self.header.len(),
            "csv rows must match the header width"
        );
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.header).expect("csv write");
        for row in &self.rows {
            writer.write_record(row).expect("csv write");
        }
        let bytes = writer.into_inner().expect("csv flush");
        String::from_utf8(bytes).expect("csv output is utf-8")
    }
}

/// Everything one command invocation produces. The binary renders exactly
/// one of the three formats and exits with `exit_code`.
pub struct CommandOutput {
    /// Command name, used in error messages about format availability.
    pub command: &'static str,
    /// The JSON report.
    pub envelope: Value,
    /// The CSV table, for commands whose result is tabular.
    pub csv: Option<CsvTable>,
    /// The text summary, newline-terminated.
    pub text: String,
    /// 0 = verdict computed / assertions met; 1 = assertion failed;
    /// 2 = probe found a violation.
    pub exit_code: i32,
}

impl CommandOutput {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(render_json(&self.envelope)),
            Format::Text => Ok(self.text.clone()),
            Format::Csv => match &self.csv {
                Some(table) => Ok(table.render()),
                None => Err(CliError::new(format!(
                    "csv output is not available for `{}`; use json or text",
                    self.command
                ))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fuzzy_potts::rational::ratio;

    #[test]
    fn rational_objects_have_exact_and_decimal() {
        let v = rational_json(&ratio(-1, 128));
        assert_eq!(v["exact"], "-1/128");
        assert_eq!(v["decimal"], "-0.0078125");
    }

    #[test]
    fn envelope_has_versioned_schema() {
        let v = envelope("measure", json!({}), json!({"ok": true}));
        assert_eq!(v["schema"], SCHEMA_ID);
        assert_eq!(v["command"], "measure");
        let text = render_json(&v);
        assert!(text.ends_with('\n'));
        // serde_json maps iterate sorted by key, so rendering is canonical.
        let again = render_json(&v);
        assert_eq!(text, again);
    }

    #[test]
    fn csv_renders_header_and_rows() {
        let mut t = CsvTable::new(vec!["rank", "exact"]);
        t.push(vec!["0", "1/3"]);
        t.push(vec!["1", "2/3"]);
        assert_eq!(t.render(), "rank,exact\n0,1/3\n1,2/3\n");
    }
}
