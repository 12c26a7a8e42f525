//! Output handling: destination, format selection, colors, CSV quoting.

use std::fs;
use std::io::{IsTerminal, Write};
use std::path::PathBuf;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
    Csv,
}

/// Where a report goes; also decides whether color is appropriate.
pub struct Sink {
    out: Option<PathBuf>,
}

impl Sink {
    pub fn new(out: Option<PathBuf>) -> Self {
        Self { out }
    }

    /// Colors only for text on an interactive stdout, and never when
    /// NO_COLOR is set.
    pub fn color(&self, format: FormatArg) -> bool {
        format == FormatArg::Text
            && self.out.is_none()
            && std::env::var_os("NO_COLOR").is_none()
            && std::io::stdout().is_terminal()
    }

    pub fn write(&self, content: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => fs::write(path, content)
                .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(content.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::Failure(format!("cannot write to stdout: {e}")))
            }
        }
    }
}

pub fn pass_fail(pass: bool, color: bool) -> String {
    match (pass, color) {
        (true, true) => "\x1b[32mPASS\x1b[0m".into(),
        (false, true) => "\x1b[31mFAIL\x1b[0m".into(),
        (true, false) => "PASS".into(),
        (false, false) => "FAIL".into(),
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Failure(format!("JSON encoding failed: {e}")))
}

/// Minimal CSV quoting: fields with commas, quotes or newlines are wrapped.
fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn csv_row<I: IntoIterator<Item = String>>(fields: I) -> String {
    let cells: Vec<String> = fields.into_iter().map(|f| csv_field(&f)).collect();
    let mut row = cells.join(",");
    row.push('\n');
    row
}

/// Shortest representation that parses back to the same f64.
pub fn num(v: f64) -> String {
    format!("{v}")
}
