use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::{CliResult, Failure};

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("cannot write {}: {e}", path.display()))
}

pub fn prepare_dir(dir: &Path) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    Ok(dir.to_path_buf())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_failure(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_failure(path, e))
}

pub fn csv_writer(path: &Path) -> CliResult<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| io_failure(path, e))
}

pub fn write_row<I, T>(w: &mut csv::Writer<fs::File>, path: &Path, row: I) -> CliResult
where
    I: IntoIterator<Item = T>,
    T: AsRef<[u8]>,
{
    w.write_record(row).map_err(|e| io_failure(path, e))
}

pub fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> CliResult {
    w.flush().map_err(|e| io_failure(path, e))
}

/// Fixed-width float formatting so CSV output is stable.
pub fn float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.15e}")
}
