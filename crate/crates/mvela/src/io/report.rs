//! Selection reports (JSON) and analysis tables (CSV).

use std::collections::BTreeMap;
use std::path::Path;

use mvela_core::analysis::Correlation;
use serde::Serialize;

use super::{csv_writer, finish, format_optional_f64, write_bytes, write_record};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepReport {
    /// `add` or `remove`.
    pub action: &'static str,
    pub feature: String,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionReport {
    pub encoding: String,
    pub folds: usize,
    pub seed: u64,
    pub instances: usize,
    pub rows: usize,
    /// Selected features in inclusion order.
    pub subset: Vec<String>,
    pub steps: Vec<StepReport>,
    pub baseline_accuracy: f64,
    pub cv_accuracy: f64,
    pub model_evaluations: usize,
    /// Instances found in more than one fold.
    pub leakage: usize,
    /// Out-of-fold algorithm choice per instance.
    pub predictions: BTreeMap<String, String>,
    pub labels: BTreeMap<String, String>,
    pub design_cost: BTreeMap<String, f64>,
    pub model_ert: f64,
    pub sbs: String,
    pub sbs_ert: f64,
    pub vbs_ert: f64,
    pub gap_closure: f64,
}

pub fn write_report(path: &Path, report: &SelectionReport) -> Result<()> {
    let mut json = serde_json::to_vec_pretty(report).expect("reports serialize");
    json.push(b'\n');
    write_bytes(path, &json)
}

pub fn write_correlations(path: &Path, rows: &[Correlation]) -> Result<()> {
    let mut w = csv_writer();
    write_record(path, &mut w, ["feature_name", "pearson", "spearman", "n"])?;
    for c in rows {
        write_record(
            path,
            &mut w,
            [c.feature.clone(), format_optional_f64(c.pearson), format_optional_f64(c.spearman), c.n.to_string()],
        )?;
    }
    finish(path, w)
}

pub fn write_clusters(path: &Path, ids: &[String], labels: &[usize]) -> Result<()> {
    let mut w = csv_writer();
    write_record(path, &mut w, ["instance_id", "cluster"])?;
    for (id, l) in ids.iter().zip(labels) {
        write_record(path, &mut w, [id.clone(), l.to_string()])?;
    }
    finish(path, w)
}
