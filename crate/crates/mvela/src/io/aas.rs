//! AAS datasets in wide format: `instance_id,repetition,<features>...,label`.

use std::path::Path;

use mvela_core::selection::{AasDataset, AasRow};

use super::{csv_writer, finish, format_optional_f64, parse_optional_f64, parse_uint, read_table, write_record};
use crate::{Error, Result};

pub fn write_aas(path: &Path, data: &AasDataset) -> Result<()> {
    let mut w = csv_writer();
    write_record(
        path,
        &mut w,
        ["instance_id", "repetition"].into_iter().chain(data.feature_names.iter().map(String::as_str)).chain(["label"]),
    )?;
    for r in &data.rows {
        let mut rec = vec![r.instance_id.clone(), r.repetition.to_string()];
        rec.extend(r.features.iter().map(|v| format_optional_f64(*v)));
        rec.push(r.label.clone());
        write_record(path, &mut w, rec)?;
    }
    finish(path, w)
}

pub fn read_aas(path: &Path) -> Result<AasDataset> {
    let table = read_table(path)?;
    let h = &table.header;
    if h.len() < 3 || h[0] != "instance_id" || h[1] != "repetition" || h[h.len() - 1] != "label" {
        return Err(Error::format(path, 1, "header must be `instance_id,repetition,<features>...,label`"));
    }
    let names: Vec<String> = h[2..h.len() - 1].to_vec();
    let mut rows = Vec::with_capacity(table.rows.len());
    for (line, rec) in &table.rows {
        let features = names
            .iter()
            .enumerate()
            .map(|(j, n)| parse_optional_f64(path, *line, n, &rec[j + 2]))
            .collect::<Result<Vec<_>>>()?;
        rows.push(AasRow {
            instance_id: rec[0].trim().to_string(),
            repetition: parse_uint(path, *line, "repetition", &rec[1])?,
            features,
            label: rec[h.len() - 1].trim().to_string(),
        });
    }
    AasDataset::new(names, rows).map_err(|e| Error::invalid(path, e.to_string()))
}
