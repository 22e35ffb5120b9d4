//! Solver traces: `instance_id,algorithm,run_id,fe,y`, one row per
//! evaluation.

use std::collections::HashMap;
use std::path::Path;

use mvela_core::performance::{Evaluation, RunTrace};

use super::{csv_writer, expect_header, finish, parse_f64, parse_uint, read_table, write_record};
use crate::{Error, Result};

pub const HEADER: [&str; 5] = ["instance_id", "algorithm", "run_id", "fe", "y"];

pub fn write_traces(path: &Path, traces: &[RunTrace]) -> Result<()> {
    let mut w = csv_writer();
    write_record(path, &mut w, HEADER)?;
    for t in traces {
        let run = t.run_id.to_string();
        for e in &t.evaluations {
            write_record(
                path,
                &mut w,
                [t.instance_id.as_str(), &t.algorithm, &run, &e.fe.to_string(), &e.y.to_string()],
            )?;
        }
    }
    finish(path, w)
}

/// Reads runs in order of first appearance. Within a run `fe` must start at
/// 1 or later and strictly increase; `y` must be finite.
pub fn read_traces(path: &Path) -> Result<Vec<RunTrace>> {
    let table = read_table(path)?;
    expect_header(path, &table.header, &HEADER)?;
    let mut index: HashMap<(String, String, u32), usize> = HashMap::new();
    let mut out: Vec<RunTrace> = Vec::new();
    for (line, rec) in &table.rows {
        let line = *line;
        let run_id: u32 = parse_uint(path, line, "run_id", &rec[2])?;
        let fe: u64 = parse_uint(path, line, "fe", &rec[3])?;
        let y = parse_f64(path, line, "y", &rec[4])?;
        if !y.is_finite() {
            return Err(Error::format(path, line, "y must be finite"));
        }
        let key = (rec[0].trim().to_string(), rec[1].trim().to_string(), run_id);
        let at = *index.entry(key.clone()).or_insert_with(|| {
            out.push(RunTrace { instance_id: key.0, algorithm: key.1, run_id, evaluations: Vec::new() });
            out.len() - 1
        });
        let last = out[at].evaluations.last().map_or(0, |e| e.fe);
        if fe <= last {
            return Err(Error::format(path, line, format!("fe {fe} does not increase after {last}")));
        }
        out[at].evaluations.push(Evaluation { fe, y });
    }
    if out.is_empty() {
        return Err(Error::invalid(path, "no trace rows"));
    }
    Ok(out)
}
