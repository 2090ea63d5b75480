//! Interval data files: two-column `lower,upper` CSV with an optional header
//! and `#` comment lines.

use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSample, Provenance};

/// Parses CSV text. A first data line that does not parse as two numbers is
/// taken as a header; rows with `lower > upper` are rejected, not swapped.
pub fn parse_intervals(text: &str, provenance: Provenance) -> Result<IntervalSample> {
    let mut items = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let first = !seen_content;
        seen_content = true;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = match fields.as_slice() {
            [l, u] => l.parse::<f64>().ok().zip(u.parse::<f64>().ok()),
            _ => None,
        };
        let Some((lower, upper)) = parsed else {
            if first && fields.len() == 2 {
                continue;
            }
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected two numeric columns `lower,upper`, got `{line}`"),
            });
        };
        if !(lower.is_finite() && upper.is_finite()) {
            return Err(Error::Parse {
                line: line_no,
                msg: "endpoints must be finite".into(),
            });
        }
        let x = Interval::new(lower, upper).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        items.push(x);
    }
    if items.is_empty() {
        return Err(Error::NoObservations);
    }
    Ok(IntervalSample::new(items, provenance))
}

pub fn read_intervals(path: impl AsRef<Path>) -> Result<IntervalSample> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_intervals(&text, Provenance::File(path.display().to_string()))
}

/// Writes `lower,upper` rows with shortest round-trip float formatting.
pub fn write_intervals(s: &IntervalSample, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "lower,upper")?;
    for x in s.items() {
        writeln!(out, "{},{}", x.lower(), x.upper())?;
    }
    Ok(())
}

/// Hex SHA-256 of a file's bytes.
pub fn file_sha256(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| io_error(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}
