//! Readers and writers for every on-disk format.

pub mod aas;
pub mod design;
pub mod features;
pub mod perf;
pub mod report;
pub mod space;
pub mod traces;

use std::path::Path;

use csv::StringRecord;

use crate::{Error, Result};

/// Literal for an inactive variable in design files.
pub const NA: &str = "NA";

pub(crate) fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| Error::Open { path: path.to_path_buf(), source })
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| Error::Write { path: path.to_path_buf(), source })?;
    }
    std::fs::write(path, bytes).map_err(|source| Error::Write { path: path.to_path_buf(), source })
}

/// A parsed CSV file: its header and every data record with its 1-based
/// line number.
pub(crate) struct Table {
    pub header: Vec<String>,
    pub rows: Vec<(u64, StringRecord)>,
}

pub(crate) fn read_table(path: &Path) -> Result<Table> {
    let bytes = read_bytes(path)?;
    parse_table(path, &bytes)
}

pub(crate) fn parse_table(path: &Path, bytes: &[u8]) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(bytes);
    let header = reader
        .headers()
        .map_err(|e| Error::format(path, 1, e.to_string()))?
        .iter()
        .map(|s| s.trim().to_string())
        .collect::<Vec<_>>();
    if header.iter().all(String::is_empty) {
        return Err(Error::invalid(path, "empty file, a header row is required"));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::format(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != header.len() {
            return Err(Error::format(path, line, format!("expected {} fields, found {}", header.len(), rec.len())));
        }
        rows.push((line, rec));
    }
    Ok(Table { header, rows })
}

/// Checks that the header starts with `expected`.
pub(crate) fn expect_header(path: &Path, header: &[String], expected: &[&str]) -> Result<()> {
    let ok = header.len() >= expected.len() && header.iter().zip(expected).all(|(h, e)| h == e);
    if ok {
        Ok(())
    } else {
        Err(Error::format(
            path,
            1,
            format!("header must start with `{}`, found `{}`", expected.join(","), header.join(",")),
        ))
    }
}

pub(crate) fn parse_f64(path: &Path, line: u64, column: &str, s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::format(path, line, format!("{column}: `{s}` is not a number")))
}

pub(crate) fn parse_uint<T: std::str::FromStr>(path: &Path, line: u64, column: &str, s: &str) -> Result<T> {
    s.trim()
        .parse::<T>()
        .map_err(|_| Error::format(path, line, format!("{column}: `{s}` is not a non-negative integer")))
}

/// Empty or `NA` fields are missing values.
pub(crate) fn parse_optional_f64(path: &Path, line: u64, column: &str, s: &str) -> Result<f64> {
    let t = s.trim();
    if t.is_empty() || t == NA {
        Ok(mvela_core::MISSING)
    } else {
        parse_f64(path, line, column, t)
    }
}

pub(crate) fn format_optional_f64(v: f64) -> String {
    if mvela_core::is_missing(v) {
        String::new()
    } else {
        v.to_string()
    }
}

pub(crate) fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

pub(crate) fn finish(path: &Path, w: csv::Writer<Vec<u8>>) -> Result<()> {
    let bytes = w.into_inner().map_err(|e| Error::Write { path: path.to_path_buf(), source: e.into_error() })?;
    write_bytes(path, &bytes)
}

pub(crate) fn write_record<I, T>(path: &Path, w: &mut csv::Writer<Vec<u8>>, record: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[u8]>,
{
    w.write_record(record).map_err(|e| Error::Write { path: path.to_path_buf(), source: std::io::Error::other(e) })
}
