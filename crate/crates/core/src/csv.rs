//! CSV output of sweep results.
//!
//! Numbers carry at most 12 significant digits in the shortest exponent form
//! that reproduces the rounded value, so reading a table back and writing it
//! again yields identical bytes. Undefined values are written as `NA`.

use std::path::{Path, PathBuf};

use crate::error::{CouplerError, Result};
use crate::sweep::{Column, SweepResult};

pub const NA: &str = "NA";

/// Round to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    let r: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn format_value(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{:e}", round12(x)),
        None => NA.to_string(),
    }
}

fn io_err(path: &Path, source: std::io::Error) -> CouplerError {
    CouplerError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn table(grid: &[f64], columns: &[Column]) -> String {
    let mut w = ::csv::WriterBuilder::new()
        .terminator(::csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let header = std::iter::once("z").chain(columns.iter().map(|c| c.name.as_str()));
    w.write_record(header).expect("writing to memory");
    for (i, &z) in grid.iter().enumerate() {
        let row = std::iter::once(format_value(Some(z))).chain(columns.iter().map(|c| format_value(c.values[i])));
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("ASCII output")
}

/// The main statistics table.
pub fn to_csv_string(result: &SweepResult) -> String {
    table(&result.grid, &result.columns)
}

/// Photon-number distributions, one column per `(selection, n)`.
pub fn pn_csv_string(result: &SweepResult) -> String {
    table(&result.grid, &result.pn_columns)
}

/// Path of the distribution table that accompanies `path`: `out/fig7.csv` becomes `out/fig7.pn.csv`.
pub fn pn_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.pn.csv"))
}

/// Write the statistics table to `path` and, when distributions were
/// requested, the companion `.pn.csv`. Returns the files written.
pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<Vec<PathBuf>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    std::fs::write(path, to_csv_string(result)).map_err(|e| io_err(path, e))?;
    let mut written = vec![path.to_path_buf()];
    if !result.pn_columns.is_empty() {
        let pn = pn_path(path);
        std::fs::write(&pn, pn_csv_string(result)).map_err(|e| io_err(&pn, e))?;
        written.push(pn);
    }
    Ok(written)
}

/// A table read back from CSV text.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Re-emit with the same formatting as [`to_csv_string`].
    pub fn to_csv_string(&self) -> String {
        let grid: Vec<f64> = self.rows.iter().map(|r| r[0].unwrap_or(f64::NAN)).collect();
        let columns: Vec<Column> = self.header[1..]
            .iter()
            .enumerate()
            .map(|(j, name)| Column {
                name: name.clone(),
                values: self.rows.iter().map(|r| r[j + 1]).collect(),
            })
            .collect();
        table(&grid, &columns)
    }
}

/// Parse a table produced by [`emit_csv`].
pub fn read_csv(text: &str) -> Result<CsvTable> {
    let mut rdr = ::csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| CouplerError::parse(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.first().map(String::as_str) != Some("z") {
        return Err(CouplerError::parse("first column must be `z`"));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CouplerError::parse(e.to_string()))?;
        let line = Some(i + 2);
        let row = rec
            .iter()
            .zip(&header)
            .map(|(field, key)| match field {
                NA if key != "z" => Ok(None),
                f => f
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .map(Some)
                    .ok_or_else(|| CouplerError::parse_at(line, key, format!("bad number `{f}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(CsvTable { header, rows })
}
