use serde::Serialize;

use crate::config::Format;
use crate::error::CliError;

/// A rectangular CSV payload.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<const N: usize>(header: [&str; N]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(mut self, cells: impl IntoIterator<Item = String>) -> Table {
        self.rows.push(cells.into_iter().collect());
        self
    }

    pub fn push(&mut self, cells: impl IntoIterator<Item = String>) {
        self.rows.push(cells.into_iter().collect());
    }

    fn render(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }
}

/// One result in all three renderings.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: String,
    pub csv: Table,
}

impl Report {
    pub fn new(text: impl Into<String>, json: String, csv: Table) -> Report {
        Report { text: text.into(), json, csv }
    }

    /// A single named value whose text form is also its CSV cell.
    pub fn scalar<T: Serialize>(name: &str, text: String, value: &T) -> Result<Report, CliError> {
        let csv = Table::new([name]).row([text.clone()]);
        Ok(Report::new(text, to_json(value)?, csv))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let mut out = match format {
            Format::Text => self.text.clone(),
            Format::Json => self.json.clone(),
            Format::Csv => return self.csv.render(),
        };
        if !out.ends_with('\n') {
            out.push('\n');
        }
        Ok(out)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))
}
