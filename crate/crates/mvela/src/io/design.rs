//! Designs as CSV: one column per variable in declaration order, `NA` for
//! inactive entries, and a final `y` column.

use std::path::Path;

use mvela_core::sampling::Design;
use mvela_core::space::{Domain, SearchSpace, Value};

use super::{csv_writer, finish, parse_f64, read_table, write_record, NA};
use crate::{Error, Result};

fn format_value(v: &Value) -> String {
    match v {
        Value::Na => NA.to_string(),
        other => other.to_string(),
    }
}

pub fn write_design(path: &Path, design: &Design, space: &SearchSpace) -> Result<()> {
    let mut w = csv_writer();
    write_record(path, &mut w, space.variables.iter().map(|v| v.id.as_str()).chain(["y"]))?;
    for (row, y) in design.rows.iter().zip(&design.y) {
        write_record(path, &mut w, row.iter().map(format_value).chain([y.to_string()]))?;
    }
    finish(path, w)
}

fn parse_value(path: &Path, line: u64, id: &str, domain: &Domain, s: &str) -> Result<Value> {
    let s = s.trim();
    if s == NA {
        return Ok(Value::Na);
    }
    let bad = |what: &str| Error::format(path, line, format!("{id}: `{s}` is not {what}"));
    let v = match domain {
        Domain::Continuous { .. } => Value::Real(s.parse().map_err(|_| bad("a number"))?),
        Domain::Integer { .. } => Value::Int(s.parse().map_err(|_| bad("an integer"))?),
        Domain::Categorical { .. } => Value::Cat(s.to_string()),
    };
    if !domain.contains(&v) {
        return Err(Error::format(path, line, format!("{id}: `{s}` is outside the domain")));
    }
    Ok(v)
}

/// Reads a design for `space`; the header must list the variable ids in
/// declaration order followed by `y`.
pub fn read_design(path: &Path, space: &SearchSpace) -> Result<Design> {
    let table = read_table(path)?;
    let expected: Vec<&str> = space.variables.iter().map(|v| v.id.as_str()).chain(["y"]).collect();
    if table.header != expected {
        return Err(Error::format(path, 1, format!("header must be `{}`", expected.join(","))));
    }
    let mut rows = Vec::with_capacity(table.rows.len());
    let mut y = Vec::with_capacity(table.rows.len());
    for (line, rec) in &table.rows {
        let row = space
            .variables
            .iter()
            .zip(rec.iter())
            .map(|(var, field)| parse_value(path, *line, &var.id, &var.domain, field))
            .collect::<Result<Vec<_>>>()?;
        space.check_feasible(&row).map_err(|e| Error::format(path, *line, e.to_string()))?;
        rows.push(row);
        y.push(parse_f64(path, *line, "y", &rec[space.dim()])?);
    }
    if rows.is_empty() {
        return Err(Error::invalid(path, "design has no rows"));
    }
    Ok(Design { space_name: space.name.clone(), rows, y, seed: 0 })
}
