//! Tabular and JSON artifacts.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::SCHEMA_VERSION;
use crate::error::{Error, Result};

/// Decimal rendering with 12 significant digits.
///
/// ```
/// use gromov_walk::output::fmt_float;
/// assert_eq!(fmt_float(0.5), "0.500000000000");
/// assert_eq!(fmt_float(-1234.5), "-1234.50000000");
/// assert_eq!(fmt_float(4.04597e-5), "0.0000404597000000");
/// ```
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let prec = (11 - exp).max(0) as usize;
    let s = format!("{x:.prec$}");
    // rounding can carry into a new leading digit
    let digits = s.chars().filter(|c| c.is_ascii_digit()).skip_while(|c| *c == '0').count();
    if digits > 12 && prec > 0 {
        let prec = prec - 1;
        return format!("{x:.prec$}");
    }
    s
}

/// A CSV table with a fixed header.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row).map_err(io)?;
        }
        w.into_inner().map_err(|e| Error::Io(e.to_string()))
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

/// Cell helpers.
pub fn cell<T: ToString>(x: T) -> String {
    x.to_string()
}

pub fn fcell(x: f64) -> String {
    fmt_float(x)
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} is not a file path", path.display())))?
        .to_string_lossy()
        .into_owned();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let mut f = std::fs::File::create(&tmp)?;
    f.write_all(bytes)?;
    f.sync_all()?;
    drop(f);
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// `git describe`-style version of this build.
pub fn version_string() -> String {
    option_env!("GROMOV_WALK_DESCRIBE")
        .map(str::to_string)
        .unwrap_or_else(|| format!("v{}", env!("CARGO_PKG_VERSION")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub config_digest: String,
    pub version: String,
    pub estimator: String,
    pub payload: Value,
    pub wall_clock_s: f64,
}

impl ResultRecord {
    pub fn new(config_digest: String, estimator: &str, payload: Value, wall_clock_s: f64) -> ResultRecord {
        ResultRecord {
            schema_version: SCHEMA_VERSION,
            config_digest,
            version: version_string(),
            estimator: estimator.into(),
            payload,
            wall_clock_s,
        }
    }
}

/// The record sits next to the CSV: `out.csv` gets `out.json`.
pub fn record_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}
