//! Feature vectors in long format:
//! `instance_id,encoding,repetition,feature_name,value`, one row per feature.

use std::collections::HashMap;
use std::path::Path;

use mvela_core::encoding::Encoding;
use mvela_core::features::{feature_index, FeatureVector, FEATURE_NAMES, N_FEATURES};
use mvela_core::MISSING;

use super::{
    csv_writer, expect_header, finish, format_optional_f64, parse_optional_f64, parse_uint, read_table, write_record,
};
use crate::{Error, Result};

pub const HEADER: [&str; 5] = ["instance_id", "encoding", "repetition", "feature_name", "value"];

pub fn write_features(path: &Path, features: &[FeatureVector]) -> Result<()> {
    let mut w = csv_writer();
    write_record(path, &mut w, HEADER)?;
    for fv in features {
        let rep = fv.repetition.to_string();
        for (name, v) in fv.iter() {
            write_record(
                path,
                &mut w,
                [fv.instance_id.as_str(), fv.encoding.as_str(), &rep, name, &format_optional_f64(v)],
            )?;
        }
    }
    finish(path, w)
}

/// Reads feature vectors in order of first appearance. Every
/// `(instance, encoding, repetition)` must list each feature exactly once.
/// The design cost is not stored and reads back as 0.
pub fn read_features(path: &Path) -> Result<Vec<FeatureVector>> {
    let table = read_table(path)?;
    expect_header(path, &table.header, &HEADER)?;
    let mut index: HashMap<(String, Encoding, u32), usize> = HashMap::new();
    let mut out: Vec<FeatureVector> = Vec::new();
    let mut seen: Vec<[bool; N_FEATURES]> = Vec::new();
    for (line, rec) in &table.rows {
        let line = *line;
        let encoding: Encoding =
            rec[1].trim().parse().map_err(|_| Error::format(path, line, format!("unknown encoding `{}`", &rec[1])))?;
        let repetition: u32 = parse_uint(path, line, "repetition", &rec[2])?;
        let name = rec[3].trim();
        let j = feature_index(name).ok_or_else(|| Error::format(path, line, format!("unknown feature `{name}`")))?;
        let value = parse_optional_f64(path, line, name, &rec[4])?;
        let key = (rec[0].trim().to_string(), encoding, repetition);
        let at = *index.entry(key.clone()).or_insert_with(|| {
            out.push(FeatureVector {
                values: [MISSING; N_FEATURES],
                instance_id: key.0,
                encoding,
                repetition,
                cost: 0,
            });
            seen.push([false; N_FEATURES]);
            out.len() - 1
        });
        if std::mem::replace(&mut seen[at][j], true) {
            return Err(Error::format(path, line, format!("feature `{name}` repeated")));
        }
        out[at].values[j] = value;
    }
    if out.is_empty() {
        return Err(Error::invalid(path, "no feature rows"));
    }
    for (fv, s) in out.iter().zip(&seen) {
        if let Some(j) = s.iter().position(|b| !b) {
            return Err(Error::invalid(
                path,
                format!(
                    "{} / {} / repetition {} lacks feature `{}`",
                    fv.instance_id, fv.encoding, fv.repetition, FEATURE_NAMES[j]
                ),
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mvela_core::features::featurize_repetitions;
    use mvela_core::problems;

    #[test]
    fn round_trip_keeps_missing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let mut fvs = featurize_repetitions(&problems::hier1(), Encoding::Target, 40, 2, 1).unwrap();
        fvs[0].values[5] = MISSING;
        write_features(&path, &fvs).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * N_FEATURES);
        let back = read_features(&path).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in fvs.iter().zip(&back) {
            assert_eq!((&a.instance_id, a.encoding, a.repetition), (&b.instance_id, b.encoding, b.repetition));
            for (u, v) in a.values.iter().zip(&b.values) {
                assert!(u == v || (u.is_nan() && v.is_nan()));
            }
        }
    }

    #[test]
    fn incomplete_vector_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        std::fs::write(&path, "instance_id,encoding,repetition,feature_name,value\ni,te,0,dimension,2\n").unwrap();
        assert!(read_features(&path).unwrap_err().to_string().contains("lacks feature"));
        std::fs::write(&path, "instance_id,encoding,repetition,feature_name,value\ni,te,0,bogus,2\n").unwrap();
        assert!(read_features(&path).unwrap_err().to_string().contains("line 2"));
    }
}
