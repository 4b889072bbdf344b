//! Deterministic CSV and JSON writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Scenario, Settings};
use super::CliError;
use crate::VERSION;

/// Twelve significant digits in scientific notation; `-0` prints as `0`.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// One-line record of the program version and the full parameter set.
pub fn provenance_line(scenario: Scenario, settings: &Settings, extra: &str) -> Result<String, CliError> {
    let json = serde_json::to_string(settings)?;
    let mut line = format!("# cpbs {VERSION} scenario={} settings={json}", scenario.name());
    if !extra.is_empty() {
        line.push(' ');
        line.push_str(extra);
    }
    Ok(line)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    let f = File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(BufWriter::new(f))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes a `#` comment line, a header row and the data rows.
pub fn write_csv<I>(path: &Path, comment: &str, header: &[String], rows: I) -> Result<PathBuf, CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut out = create(path)?;
    writeln!(out, "{comment}").map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(path.to_path_buf())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<PathBuf, CliError> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))?;
    Ok(path.to_path_buf())
}
