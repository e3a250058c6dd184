//! Artifact writers. Files are written to a sibling temporary and renamed,
//! so a failed run never leaves a partial file behind.

use crate::error::{CliError, CliResult};
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Fails early when `path` cannot be created: missing or non-directory
/// parent, or an existing directory at the path itself.
pub fn check_writable(path: &Path) -> CliResult<()> {
    if path.is_dir() {
        return Err(CliError::config(format!("{} is a directory", path.display())));
    }
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    if !parent.is_dir() {
        return Err(CliError::config(format!("directory {} does not exist", parent.display())));
    }
    let meta = std::fs::metadata(&parent)?;
    if meta.permissions().readonly() {
        return Err(CliError::config(format!("directory {} is not writable", parent.display())));
    }
    Ok(())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(|e| CliError::config(format!("writing {}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes JSON to `path`, or to stdout when no path is given.
pub fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> CliResult<()> {
    let text = to_json(value)?;
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Shortest round-trip decimal, switching to exponent form for very small
/// or very large magnitudes. Never locale dependent.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

/// CSV with a header row.
pub fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Numerical(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(row.iter().map(|&v| format_float(v))).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numerical(format!("csv: {e}")))?;
    write_atomic(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let dir = std::env::temp_dir().join(format!("rotwave-out-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        check_writable(&path).unwrap();
        write_csv(&path, &["a", "b"], vec![vec![1.0, 0.1], vec![-2.5, 1e-20]].into_iter()).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "a,b\n1,0.1\n-2.5,1e-20\n");
        assert!(check_writable(&dir).is_err());
        assert!(check_writable(&dir.join("missing/x.csv")).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
