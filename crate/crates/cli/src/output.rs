//! Artifact assembly: the config digest, the JSON envelope and CSV tables.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::args::Format;
use crate::error::CliError;

/// Hex SHA-256 of the compact JSON form of the resolved configuration.
pub fn config_digest(config: &Value) -> String {
    hex::encode(Sha256::digest(config.to_string().as_bytes()))
}

pub fn num(v: f64) -> String {
    format!("{v:.17e}")
}

/// A CSV table. Rows are padded to the header width.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert!(row.len() <= self.columns.len());
        self.rows.push(row);
    }

    fn write(&self, digest: &str) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["config_digest"];
        header.extend(&self.columns);
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = Vec::with_capacity(header.len());
            rec.push(digest.to_string());
            rec.extend(row.iter().cloned());
            rec.resize(header.len(), String::new());
            w.write_record(&rec)?;
        }
        w.into_inner()
            .map_err(|e| CliError::Io(e.to_string()))
    }
}

/// What a command produced: a structured result, its flat table, and
/// whether every check it ran passed.
pub struct Artifact {
    pub config: Value,
    pub result: Value,
    pub table: Table,
    pub passed: bool,
}

impl Artifact {
    pub fn new(config: Value, result: impl Serialize, table: Table, passed: bool) -> Result<Self, CliError> {
        Ok(Artifact {
            config,
            result: serde_json::to_value(result)?,
            table,
            passed,
        })
    }

    pub fn render(&self, command: &str, format: Format) -> Result<Vec<u8>, CliError> {
        let digest = config_digest(&self.config);
        match format {
            Format::Json => {
                let doc = json!({
                    "command": command,
                    "config_digest": digest,
                    "config": self.config,
                    "passed": self.passed,
                    "result": self.result,
                });
                let mut s = serde_json::to_string_pretty(&doc)?;
                s.push('\n');
                Ok(s.into_bytes())
            }
            Format::Csv => self.table.write(&digest),
        }
    }
}

/// Writes to `<out>/<command>.<ext>` or to stdout.
pub fn emit(bytes: &[u8], command: &str, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(format!("{command}.{}", format.extension())), bytes)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}
