//! CSV and JSON emission.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

/// 17 significant digits, enough to round-trip an `f64`.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a CSV table with a mandatory header row.
pub fn write_csv(dir: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<PathBuf> {
    let path = dir.join(name);
    let mut writer = csv::Writer::from_path(&path)?;
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(path)
}

pub fn write_json<V: Serialize>(dir: &Path, name: &str, value: &V) -> anyhow::Result<PathBuf> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}
