//! Deterministic CSV output with a `#` header block.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::CliError;

pub fn num(x: f64) -> String {
    // avoid printing `-0`
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Accumulates a CSV document: header comments, column names, rows.
pub struct Csv {
    text: String,
}

impl Csv {
    /// Starts with the tool version and the command name.
    pub fn new(command: &str) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "# biharm {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(text, "# command = {command}");
        Self { text }
    }

    pub fn comment(&mut self, line: &str) {
        let _ = writeln!(self.text, "# {line}");
    }

    /// Echo a serialized config, one `#` line per TOML line.
    pub fn echo_toml<T: serde::Serialize>(&mut self, value: &T) -> Result<(), CliError> {
        let body = toml::to_string(value).map_err(|e| CliError::Input(format!("cannot echo config: {e}")))?;
        for line in body.lines().filter(|l| !l.is_empty()) {
            self.comment(line);
        }
        Ok(())
    }

    pub fn columns(&mut self, names: &[&str]) {
        self.text.push_str(&names.join(","));
        self.text.push('\n');
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn raw_row(&mut self, line: &str) {
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Write to `path`, or stdout when absent.
    pub fn emit(&self, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => std::fs::write(p, &self.text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(self.text.as_bytes()).map_err(|e| CliError::Failure(format!("stdout: {e}")))
            }
        }
    }
}
