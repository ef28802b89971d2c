use std::io::Write;

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Rows of a result table with comment lines before and after.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub warnings: Vec<String>,
    pub summary: Map<String, Value>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Table::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub enum Output {
    /// A single value or structured report.
    Report(Map<String, Value>),
    Table(Table),
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Round for display; keeps outputs stable across platforms.
pub fn round(x: f64, digits: i32) -> f64 {
    let k = 10f64.powi(digits);
    (x * k).round() / k
}

pub fn render(out: &Output, config: &Value, format: Format, w: &mut impl Write) -> std::io::Result<()> {
    match (out, format) {
        (Output::Report(m), Format::Json) => {
            let mut obj = Map::new();
            obj.insert("config".into(), config.clone());
            obj.extend(m.clone());
            writeln!(w, "{}", serde_json::to_string_pretty(&Value::Object(obj))?)
        }
        (Output::Report(m), Format::Csv) => {
            writeln!(w, "# config: {config}")?;
            writeln!(w, "key,value")?;
            for (k, v) in m {
                writeln!(w, "{},{}", csv_field(k), csv_field(&scalar_text(v)))?;
            }
            Ok(())
        }
        (Output::Table(t), Format::Csv) => {
            writeln!(w, "# config: {config}")?;
            for warn in &t.warnings {
                writeln!(w, "# warning: {warn}")?;
            }
            writeln!(w, "{}", t.columns.join(","))?;
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(|c| csv_field(c)).collect();
                writeln!(w, "{}", cells.join(","))?;
            }
            if !t.summary.is_empty() {
                let parts: Vec<String> = t.summary.iter().map(|(k, v)| format!("{k}={}", scalar_text(v))).collect();
                writeln!(w, "# summary: {}", parts.join(" "))?;
            }
            for n in &t.notes {
                writeln!(w, "# {n}")?;
            }
            Ok(())
        }
        (Output::Table(t), Format::Json) => {
            let v = json!({
                "config": config,
                "warnings": t.warnings,
                "columns": t.columns,
                "rows": t.rows,
                "summary": t.summary,
                "notes": t.notes,
            });
            writeln!(w, "{}", serde_json::to_string_pretty(&v)?)
        }
    }
}
