use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

/// A command result: a JSON document plus a flat table for CSV and
/// Markdown output.
#[derive(Clone, Debug)]
pub struct Report {
    pub title: String,
    pub data: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Set when computed values disagree with the embedded expectations.
    pub mismatch: Option<String>,
}

impl Report {
    pub fn new(title: impl Into<String>, data: impl Serialize) -> Result<Self> {
        Ok(Self {
            title: title.into(),
            data: serde_json::to_value(data)?,
            columns: Vec::new(),
            rows: Vec::new(),
            mismatch: None,
        })
    }

    pub fn table(mut self, columns: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.columns = columns.iter().map(|c| c.to_string()).collect();
        self.rows = rows;
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.data)? + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                let bytes = w.into_inner().map_err(|e| e.into_error())?;
                Ok(String::from_utf8_lossy(&bytes).into_owned())
            }
            Format::Md => Ok(self.markdown()),
        }
    }

    fn markdown(&self) -> String {
        let mut out = format!("## {}\n\n", self.title);
        if self.columns.is_empty() {
            return out;
        }
        out += &format!("| {} |\n", self.columns.join(" | "));
        out += &format!("|{}\n", "---|".repeat(self.columns.len()));
        for r in &self.rows {
            out += &format!("| {} |\n", r.join(" | "));
        }
        out
    }
}

/// Shorthand for building table rows from displayable values.
#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => {
        vec![$($x.to_string()),*]
    };
}
