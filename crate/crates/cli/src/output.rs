use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use serde_json::Value;

use crate::Format;

/// Where results go: `--out` or stdout, in the requested format.
pub struct Sink {
    out: Option<PathBuf>,
    format: Option<Format>,
}

impl Sink {
    pub fn new(out: Option<PathBuf>, format: Option<Format>) -> Self {
        Sink { out, format }
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn out(&self) -> Option<&PathBuf> {
        self.out.as_ref()
    }

    pub fn write(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }

    pub fn json(&self, v: &Value) -> anyhow::Result<()> {
        self.write(&(serde_json::to_string_pretty(v)? + "\n"))
    }

    pub fn csv(&self, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
        self.write(&csv_text(header, rows))
    }
}

pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Prints a metadata document to stdout regardless of `--out`.
pub fn print_json(v: &Value) -> anyhow::Result<()> {
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}
