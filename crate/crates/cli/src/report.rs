//! Shared output plumbing: check lines, text/JSON rendering, `--out` files.

use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// How a check's value relates to its bound.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Pass when `value <= bound`.
    Max,
    /// Pass when `value == bound` exactly (integer-valued checks).
    Eq,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub kind: CheckKind,
    pub pass: bool,
}

impl CheckLine {
    pub fn max(name: impl Into<String>, value: f64, bound: f64) -> CheckLine {
        CheckLine { name: name.into(), value, bound, kind: CheckKind::Max, pass: value <= bound }
    }

    pub fn eq(name: impl Into<String>, value: usize, expected: usize) -> CheckLine {
        CheckLine {
            name: name.into(),
            value: value as f64,
            bound: expected as f64,
            kind: CheckKind::Eq,
            pass: value == expected,
        }
    }

    pub fn render_text(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        match self.kind {
            CheckKind::Max => format!(
                "  {:<28} {:>12.3e}  (<= {:.1e})  {}",
                self.name, self.value, self.bound, status
            ),
            CheckKind::Eq => format!(
                "  {:<28} {:>12}  (expected {})  {}",
                self.name, self.value as i64, self.bound as i64, status
            ),
        }
    }
}

/// Write a line to stdout, treating a closed pipe (e.g. `| head`) as
/// end-of-output rather than an error.
fn print_stdout(body: &str) -> anyhow::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{body}") {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(e).context("writing to stdout"),
    }
}

/// Print the chosen format to stdout and optionally write the JSON report
/// to a file.
pub fn emit(
    text: &str,
    json: &impl Serialize,
    format: Format,
    out: Option<&PathBuf>,
) -> anyhow::Result<()> {
    // Write the file first so a closed stdout cannot suppress the report.
    if let Some(path) = out {
        write_json(path, json)?;
    }
    match format {
        Format::Text => print_stdout(text)?,
        Format::Json => print_stdout(&serde_json::to_string_pretty(json)?)?,
    }
    Ok(())
}

fn write_json(path: &Path, json: &impl Serialize) -> anyhow::Result<()> {
    let body = serde_json::to_string_pretty(json)?;
    std::fs::write(path, body + "\n")
        .with_context(|| format!("writing report to {}", path.display()))?;
    Ok(())
}
