//! Deterministic data emission: CSV with a config-echo header, or JSON with
//! the same content. Two runs with identical config produce identical bytes.

use std::io::Write;
use std::path::Path;

use crate::config::{fmt_f64, OutputFormat, ScenarioConfig};
use crate::CliError;

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => {
                if v.is_nan() {
                    "nan".into()
                } else {
                    fmt_f64(*v)
                }
            }
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Float(v) if v.is_nan() => serde_json::Value::Null,
            Cell::Float(v) => serde_json::Value::from(*v),
            Cell::Text(s) => serde_json::Value::from(s.clone()),
        }
    }
}

/// One output table: column names, rows, and explanatory header lines.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra resolved keys echoed into the header alongside the config.
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.push((key.to_string(), value.into()));
    }

    fn render_csv(&self, config: &ScenarioConfig) -> String {
        let mut out = config.header(&self.notes);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self, config: &ScenarioConfig) -> String {
        let mut root = serde_json::Map::new();
        let mut cfg = serde_json::Map::new();
        for (k, v) in config.entries().iter().chain(&self.notes) {
            cfg.insert(k.clone(), serde_json::Value::from(v.clone()));
        }
        root.insert("config".into(), serde_json::Value::Object(cfg));
        root.insert(
            "columns".into(),
            serde_json::Value::from(self.columns.clone()),
        );
        root.insert(
            "rows".into(),
            serde_json::Value::from(
                self.rows
                    .iter()
                    .map(|row| {
                        serde_json::Value::from(row.iter().map(Cell::json).collect::<Vec<_>>())
                    })
                    .collect::<Vec<_>>(),
            ),
        );
        let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(root))
            .expect("static structure serializes");
        text.push('\n');
        text
    }

    pub fn render(&self, config: &ScenarioConfig) -> String {
        match config.format {
            OutputFormat::Csv => self.render_csv(config),
            OutputFormat::Json => self.render_json(config),
        }
    }

    /// Write to the configured path, or stdout when none is set.
    pub fn emit(&self, config: &ScenarioConfig) -> Result<(), CliError> {
        let payload = self.render(config);
        match &config.out {
            Some(path) => write_file(path, &payload),
            None => {
                std::io::stdout()
                    .write_all(payload.as_bytes())
                    .map_err(|e| CliError::config(format!("cannot write to stdout: {e}")))?;
                Ok(())
            }
        }
    }
}

pub fn write_file(path: &Path, payload: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| {
                CliError::config(format!("cannot create {}: {e}", parent.display()))
            })?;
        }
    }
    std::fs::write(path, payload)
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Scenario;

    #[test]
    fn csv_rendering_is_stable() {
        let config = ScenarioConfig::defaults(Scenario::SpectrumHermitian);
        let mut t = Table::new(&["n", "branch", "re_e", "im_e"]);
        t.push(vec![
            Cell::Int(0),
            Cell::Text("+".into()),
            Cell::Float(0.2),
            Cell::Float(0.0),
        ]);
        let a = t.render(&config);
        let b = t.render(&config);
        assert_eq!(a, b);
        assert!(a.contains("# scenario = spectrum_hermitian\n"));
        assert!(a.ends_with("0,+,0.2,0\n"));
    }

    #[test]
    fn nan_in_csv_and_json() {
        let mut config = ScenarioConfig::defaults(Scenario::StabilizationSweep);
        let mut t = Table::new(&["tau"]);
        t.push(vec![Cell::Float(f64::NAN)]);
        assert!(t.render(&config).ends_with("nan\n"));
        config.format = OutputFormat::Json;
        assert!(t.render(&config).contains("null"));
    }
}
