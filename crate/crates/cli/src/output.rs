use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

/// Round to 12 significant digits for output.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn sig12_opt(x: Option<f64>) -> Option<f64> {
    x.map(sig12)
}

fn write_records<W: Write, T: Serialize>(
    out: W,
    records: &[T],
    json: bool,
    many: bool,
) -> Result<(), CliError> {
    if json {
        let mut out = out;
        if many {
            serde_json::to_writer_pretty(&mut out, records)?;
        } else if let Some(r) = records.first() {
            serde_json::to_writer_pretty(&mut out, r)?;
        }
        writeln!(out).map_err(|e| CliError::Output(e.to_string()))?;
        return Ok(());
    }
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))?;
    Ok(())
}

/// CSV (header + rows) or JSON to stdout. A single record prints as a JSON
/// object, several as an array.
pub fn emit<T: Serialize>(records: &[T], json: bool, many: bool) -> Result<(), CliError> {
    write_records(io::stdout().lock(), records, json, many)
}

pub fn emit_to_file<T: Serialize>(path: &Path, records: &[T], json: bool) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_records(file, records, json, true).map_err(|e| match e {
        CliError::Output(msg) => CliError::Io {
            path: path.to_path_buf(),
            source: io::Error::other(msg),
        },
        other => other,
    })
}
