//! Performance tables: `instance_id,algorithm,ert,successes,runs,target,budget`.

use std::path::Path;

use mvela_core::performance::{PerfRecord, PerfTable};

use super::{csv_writer, expect_header, finish, parse_f64, parse_uint, read_table, write_record};
use crate::{Error, Result};

pub const HEADER: [&str; 7] = ["instance_id", "algorithm", "ert", "successes", "runs", "target", "budget"];

pub fn write_perf(path: &Path, table: &PerfTable) -> Result<()> {
    let mut w = csv_writer();
    write_record(path, &mut w, HEADER)?;
    for r in &table.records {
        write_record(
            path,
            &mut w,
            [
                r.instance_id.clone(),
                r.algorithm.clone(),
                r.ert.to_string(),
                r.successes.to_string(),
                r.runs.to_string(),
                r.target.to_string(),
                r.budget.to_string(),
            ],
        )?;
    }
    finish(path, w)
}

/// The trailing `budget` column is optional and reads as 0 when absent.
pub fn read_perf(path: &Path) -> Result<PerfTable> {
    let table = read_table(path)?;
    expect_header(path, &table.header, &HEADER[..6])?;
    let mut records = Vec::with_capacity(table.rows.len());
    for (line, rec) in &table.rows {
        let line = *line;
        let ert = parse_f64(path, line, "ert", &rec[2])?;
        if !(ert.is_finite() && ert > 0.0) {
            return Err(Error::format(path, line, "ert must be positive and finite"));
        }
        let r = PerfRecord {
            instance_id: rec[0].trim().to_string(),
            algorithm: rec[1].trim().to_string(),
            ert,
            successes: parse_uint(path, line, "successes", &rec[3])?,
            runs: parse_uint(path, line, "runs", &rec[4])?,
            target: parse_f64(path, line, "target", &rec[5])?,
            budget: match rec.get(6) {
                Some(b) => parse_uint(path, line, "budget", b)?,
                None => 0,
            },
        };
        if records.iter().any(|o: &PerfRecord| o.instance_id == r.instance_id && o.algorithm == r.algorithm) {
            return Err(Error::format(path, line, format!("duplicate record for {} / {}", r.instance_id, r.algorithm)));
        }
        records.push(r);
    }
    if records.is_empty() {
        return Err(Error::invalid(path, "no performance records"));
    }
    Ok(PerfTable { records })
}
