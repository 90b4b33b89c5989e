use std::collections::BTreeMap;

use serde_json::{Map, Value};

use crate::error::{CliError, Result};

/// Provenance attached to every result table.
#[derive(Clone, Debug, PartialEq)]
pub struct Metadata {
    pub experiment: String,
    pub version: String,
    /// Resolved configuration, key order.
    pub config: BTreeMap<String, String>,
    /// Derived scalars in insertion order.
    pub summary: Map<String, Value>,
}

/// Named real-valued columns with metadata. Rows are rectangular and finite.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    pub metadata: Metadata,
}

impl ResultTable {
    pub fn new(columns: Vec<String>, metadata: Metadata) -> Self {
        Self { columns, rows: Vec::new(), metadata }
    }

    /// Appends a row, checking its length and that every value is finite.
    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(CliError::Config(format!("row has {} values for {} columns", row.len(), self.columns.len())));
        }
        if let Some(i) = row.iter().position(|v| !v.is_finite()) {
            return Err(CliError::Property(format!("non-finite value in column '{}'", self.columns[i])));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Values of the named column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}
