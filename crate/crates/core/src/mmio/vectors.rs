use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::mmio::fmt_f64;

/// Reads a newline-separated vector file. Lines starting with `%` are
/// comments; blank lines are ignored; everything else must be one finite
/// decimal number.
pub fn read_vector(path: &Path) -> Result<Vector> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut entries = Vec::new();
    let mut last_line = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        let value: f64 = text.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("expected a decimal number, got {text:?}"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("vector entry must be finite, got {text:?}"),
            });
        }
        entries.push(value);
    }
    if entries.is_empty() {
        return Err(Error::Parse {
            line: last_line,
            message: "no vector entries in file".into(),
        });
    }
    Vector::new(entries)
}

/// Writes one entry per line with 17 significant digits.
pub fn write_vector(v: &Vector, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    for x in v.iter() {
        writeln!(out, "{}", fmt_f64(*x))?;
    }
    out.flush()?;
    Ok(())
}
