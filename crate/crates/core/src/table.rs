//! Machine-readable result tables: CSV rows plus a sidecar metadata record
//! carrying everything needed to rerun the experiment bit-identically.

use crate::config::ConfigError;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableMetadata {
    pub scenario: String,
    pub master_seed: u64,
    pub tool_version: String,
    pub wall_time_s: f64,
    /// Effective (defaults-resolved) config, reloadable as-is.
    pub config_echo: String,
}

#[derive(Debug, Clone)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: TableMetadata,
}

impl ResultTable {
    pub fn new(columns: &[&str], metadata: TableMetadata) -> Self {
        ResultTable {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// CSV rendering of header and rows; float formatting is fixed
    /// (shortest round-trip repr), so identical runs are byte-identical.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Write `<path>` as CSV and `<path>.meta.json` with the metadata.
    pub fn write(&self, path: &Path) -> Result<(), ConfigError> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv().as_bytes())?;
        let meta_path = path.with_extension(format!(
            "{}.meta.json",
            path.extension().and_then(|e| e.to_str()).unwrap_or("csv")
        ));
        let meta = serde_json::to_string_pretty(&self.metadata).expect("metadata serializes");
        std::fs::write(meta_path, meta)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> TableMetadata {
        TableMetadata {
            scenario: "test".into(),
            master_seed: 7,
            tool_version: "0".into(),
            wall_time_s: 0.0,
            config_echo: String::new(),
        }
    }

    #[test]
    fn csv_layout_and_columns() {
        let mut t = ResultTable::new(&["a", "b"], meta());
        t.push_row(vec![1.0, 2.5]);
        t.push_row(vec![3.0, -4.0]);
        assert_eq!(t.to_csv(), "a,b\n1,2.5\n3,-4\n");
        assert_eq!(t.column("b").unwrap(), vec![2.5, -4.0]);
        assert!(t.column("c").is_none());
    }

    #[test]
    #[should_panic(expected = "row width mismatch")]
    fn ragged_rows_are_rejected() {
        let mut t = ResultTable::new(&["a", "b"], meta());
        t.push_row(vec![1.0]);
    }
}
