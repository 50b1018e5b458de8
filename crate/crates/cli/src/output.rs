//! File output: atomic writes and CSV encoding.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::failure::Failure;

/// Writes through a sibling temporary file and a rename, so readers never
/// see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let ctx = |e: std::io::Error| Failure::from(e).context(path.display());
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(ctx)?;
    }
    let name = path.file_name().map(|n| n.to_string_lossy()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, bytes).map_err(ctx)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        ctx(e)
    })
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::runtime(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Failure::runtime(e.to_string()))
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), Failure> {
    write_atomic(path, &csv_bytes(rows)?)
}

/// Mean, minimum and maximum.
pub fn stats(values: impl IntoIterator<Item = f64>) -> (f64, f64, f64) {
    let (mut sum, mut count) = (0.0, 0usize);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        sum += v;
        count += 1;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (sum / count as f64, lo, hi)
}
