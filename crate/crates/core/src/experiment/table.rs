//! Rectangular result tables and their CSV / JSON encodings.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    /// Resolved configuration echoed back.
    pub metadata: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new(columns: &[&str], metadata: Value) -> Self {
        Self { metadata, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Rectangular with finite entries.
    pub fn validate(&self) -> Result<(), RunError> {
        for (i, r) in self.rows.iter().enumerate() {
            if r.len() != self.columns.len() {
                return Err(RunError::compute(format!("row {i}"), "row width differs from header"));
            }
            if let Some(j) = r.iter().position(|x| !x.is_finite()) {
                return Err(RunError::compute(
                    format!("row {i}, column {}", self.columns[j]),
                    "non-finite value",
                ));
            }
        }
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

/// 17 significant digits, enough to round-trip any f64.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit(table: &ResultTable, format: Format) -> Result<Vec<u8>, RunError> {
    table.validate()?;
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(&table.columns).map_err(RunError::io)?;
            for r in &table.rows {
                w.write_record(r.iter().map(|&x| fmt_f64(x))).map_err(RunError::io)?;
            }
            w.into_inner().map_err(|e| RunError::io(e.into_error()))
        }
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(table).map_err(RunError::io)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

/// Inverse of [`emit`]. CSV carries no metadata, so it comes back `null`.
pub fn parse(bytes: &[u8], format: Format) -> Result<ResultTable, RunError> {
    match format {
        Format::Csv => {
            let mut r = csv::ReaderBuilder::new().from_reader(bytes);
            let columns = r.headers().map_err(RunError::io)?.iter().map(String::from).collect();
            let mut rows = Vec::new();
            for rec in r.records() {
                let rec = rec.map_err(RunError::io)?;
                let row = rec
                    .iter()
                    .map(|s| s.parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(RunError::io)?;
                rows.push(row);
            }
            Ok(ResultTable { metadata: Value::Null, columns, rows })
        }
        Format::Json => serde_json::from_slice(bytes).map_err(RunError::io),
    }
}
