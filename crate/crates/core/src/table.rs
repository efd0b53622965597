//! Tabular results of parameter sweeps, with CSV and JSON emission.
//!
//! Empty cells (`None`) mark points where a quantity has no solution. They
//! are written as empty CSV fields and JSON `null`, never as zero.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

/// Significant digits used for every number written to CSV or JSON.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rounds `x` to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

/// Formats a number the way every artifact of this crate does.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let r = round_sig(x, SIGNIFICANT_DIGITS);
    let plain = format!("{r}");
    // Display never switches to exponent form; keep tiny and huge values short.
    if r != 0.0 && (r.abs() < 1e-6 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        plain
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TableMetadata {
    pub generator: String,
    pub tool_version: String,
    /// Swept parameters as `start:stop:count`.
    pub ranges: BTreeMap<String, String>,
    pub fixed: BTreeMap<String, f64>,
    /// Scalar results derived from the whole table (fits, slopes).
    pub summary: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl TableMetadata {
    pub fn new(generator: &str) -> Self {
        Self {
            generator: generator.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("row has {got} entries but the table has {expected} columns")]
pub struct RowLengthError {
    pub expected: usize,
    pub got: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    columns: Vec<String>,
    rows: Vec<Vec<Option<f64>>>,
    pub metadata: TableMetadata,
}

impl SweepTable {
    pub fn new<S: Into<String>>(
        columns: impl IntoIterator<Item = S>,
        metadata: TableMetadata,
    ) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn push_row(&mut self, row: Vec<Option<f64>>) -> Result<(), RowLengthError> {
        if row.len() != self.columns.len() {
            return Err(RowLengthError {
                expected: self.columns.len(),
                got: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Option<f64>>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All cells of one column, empty cells included.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut wtr = csv::WriterBuilder::new().from_writer(out);
        wtr.write_record(&self.columns)?;
        for row in &self.rows {
            wtr.write_record(row.iter().map(|c| c.map(format_number).unwrap_or_default()))?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Repr<'a> {
            columns: &'a [String],
            rows: Vec<Vec<Option<f64>>>,
            metadata: TableMetadata,
        }
        let round = |x: f64| round_sig(x, SIGNIFICANT_DIGITS);
        let mut metadata = self.metadata.clone();
        for v in metadata
            .fixed
            .values_mut()
            .chain(metadata.summary.values_mut())
        {
            *v = round(*v);
        }
        let repr = Repr {
            columns: &self.columns,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|c| c.map(round)).collect())
                .collect(),
            metadata,
        };
        serde_json::to_value(repr).expect("table is serializable")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("json value") + "\n"
    }
}
