//! Tabular output: CSV with full round-trip precision, or JSON carrying the
//! resolved configuration.

use std::io::Write;

/// A rectangular numeric table plus the resolved run configuration.
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub config: serde_json::Value,
}

/// 17 significant digits: round-trips every f64 exactly. Non-finite values
/// print as `NaN`/`inf` (they appear only where an error estimate is
/// genuinely unavailable).
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    pub fn new(columns: Vec<String>, config: serde_json::Value) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            config,
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Header plus one comma-separated line per row, LF-terminated.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        let mut line = String::new();
        for row in &self.rows {
            line.clear();
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                line.push_str(&fmt(*x));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    /// One JSON object: `config`, `columns` and per-column `series` arrays.
    /// Non-finite entries become `null` (JSON has no NaN).
    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut series = serde_json::Map::new();
        for (c, name) in self.columns.iter().enumerate() {
            let values: Vec<serde_json::Value> = self
                .rows
                .iter()
                .map(|row| {
                    serde_json::Number::from_f64(row[c])
                        .map(serde_json::Value::Number)
                        .unwrap_or(serde_json::Value::Null)
                })
                .collect();
            series.insert(name.clone(), serde_json::Value::Array(values));
        }
        let doc = serde_json::json!({
            "config": self.config,
            "columns": self.columns,
            "series": series,
        });
        writeln!(w, "{}", serde_json::to_string_pretty(&doc)?)
    }
}
