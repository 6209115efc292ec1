//! Output files are written to a temporary file in the target directory and
//! renamed into place, so a failed job never leaves a partial file.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Header `trial,outcome`, one row per datum, LF line endings.
pub fn samples_csv(data: &[String]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(["trial", "outcome"]).map_err(io)?;
    for (i, x) in data.iter().enumerate() {
        w.write_record([i.to_string().as_str(), x.as_str()]).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Parses the `outcome` column of a data CSV.
pub fn read_outcomes(path: &Path) -> Result<Vec<String>, CliError> {
    let bad = |e: csv::Error| CliError::Validation(format!("{}: {e}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(bad)?;
    let col = r
        .headers()
        .map_err(bad)?
        .iter()
        .position(|h| h == "outcome")
        .ok_or_else(|| CliError::Validation(format!("{}: no `outcome` column", path.display())))?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(bad)?;
        let x = rec
            .get(col)
            .ok_or_else(|| CliError::Validation(format!("{}: short row", path.display())))?;
        out.push(x.to_string());
    }
    Ok(out)
}
