//! Algorithm selection: labelled feature data, grouped cross-validation,
//! a random-forest selector, greedy feature selection and ERT-based
//! evaluation of the resulting selector.

pub mod forest;
pub mod greedy;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::features::{FeatureVector, FEATURE_NAMES};
use crate::performance::PerfTable;
use crate::rng::{self, stream};
use crate::{is_missing, par, stats, Error, Matrix, Result};

pub use forest::{ForestConfig, ForestModel};
pub use greedy::{greedy_select, Selection, Step};

pub const DEFAULT_FOLDS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct AasRow {
    pub instance_id: String,
    pub repetition: u32,
    pub features: Vec<f64>,
    pub label: String,
}

/// Feature rows labelled with the best algorithm of their instance.
#[derive(Debug, Clone, PartialEq)]
pub struct AasDataset {
    pub feature_names: Vec<String>,
    pub rows: Vec<AasRow>,
}

impl AasDataset {
    /// Checks row widths and that every instance carries a single label.
    pub fn new(feature_names: Vec<String>, rows: Vec<AasRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty("AAS dataset".to_string()));
        }
        let mut labels: BTreeMap<&str, &str> = BTreeMap::new();
        for r in &rows {
            if r.features.len() != feature_names.len() {
                return Err(Error::LengthMismatch { expected: feature_names.len(), got: r.features.len() });
            }
            if let Some(prev) = labels.insert(&r.instance_id, &r.label) {
                if prev != r.label {
                    return Err(Error::InvalidArgument(format!(
                        "instance {} has labels {prev} and {}",
                        r.instance_id, r.label
                    )));
                }
            }
        }
        Ok(AasDataset { feature_names, rows })
    }

    /// Joins feature vectors with per-instance labels.
    pub fn from_features(features: &[FeatureVector], labels: &BTreeMap<String, String>) -> Result<Self> {
        let rows = features
            .iter()
            .map(|fv| {
                let label = labels.get(&fv.instance_id).ok_or_else(|| {
                    Error::InvalidArgument(format!("no performance data for instance {}", fv.instance_id))
                })?;
                Ok(AasRow {
                    instance_id: fv.instance_id.clone(),
                    repetition: fv.repetition,
                    features: fv.values.to_vec(),
                    label: label.clone(),
                })
            })
            .collect::<Result<_>>()?;
        Self::new(FEATURE_NAMES.iter().map(|s| s.to_string()).collect(), rows)
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Distinct instance ids, sorted.
    pub fn instance_ids(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.rows.iter().map(|r| r.instance_id.as_str()).collect();
        set.into_iter().collect()
    }

    pub fn classes(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.rows.iter().map(|r| r.label.as_str()).collect();
        set.into_iter().collect()
    }
}

/// Instance labels from a performance table: the argmin-ERT algorithm,
/// ties to the lexicographically smallest name.
pub fn labels_from_perf(table: &PerfTable) -> Result<BTreeMap<String, String>> {
    table.best_per_instance()
}

/// Shuffles the distinct instance ids by `seed` and deals them into `k`
/// groups whose sizes differ by at most one.
pub fn grouped_kfold(instance_ids: &[&str], k: usize, seed: u64) -> Result<Vec<Vec<String>>> {
    let mut ids: Vec<&str> = instance_ids.to_vec();
    ids.sort_unstable();
    ids.dedup();
    if k < 2 || k > ids.len() {
        return Err(Error::InvalidArgument(format!(
            "fold count {k} must lie in [2, {}] (distinct instances)",
            ids.len()
        )));
    }
    ids.shuffle(&mut rng::rng(rng::derive(seed, stream::FOLDS)));
    let mut folds = vec![Vec::new(); k];
    for (i, id) in ids.into_iter().enumerate() {
        folds[i % k].push(id.to_string());
    }
    Ok(folds)
}

/// Number of instances appearing in more than one fold.
pub fn leakage(folds: &[Vec<String>]) -> usize {
    let mut seen = BTreeSet::new();
    let mut leaked = BTreeSet::new();
    for f in folds {
        for id in f.iter().collect::<BTreeSet<_>>() {
            if !seen.insert(id) {
                leaked.insert(id);
            }
        }
    }
    leaked.len()
}

/// Per-column medians of the non-missing training values; a column with no
/// observed value imputes 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MedianImputer {
    pub medians: Vec<f64>,
}

impl MedianImputer {
    pub fn fit(x: &Matrix) -> Self {
        let medians = (0..x.ncols())
            .map(|j| {
                let col: Vec<f64> = x.column(j).into_iter().filter(|v| !is_missing(*v)).collect();
                if col.is_empty() {
                    0.0
                } else {
                    stats::median(&col)
                }
            })
            .collect();
        MedianImputer { medians }
    }

    pub fn transform(&self, x: &Matrix) -> Matrix {
        let mut out = x.clone();
        for i in 0..out.nrows() {
            for j in 0..out.ncols() {
                if !out.get(i, j).is_finite() {
                    out.set(i, j, self.medians[j]);
                }
            }
        }
        out
    }
}

/// Out-of-fold result of one cross-validation run.
#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    /// Mean of the per-fold accuracies.
    pub accuracy: f64,
    /// Prediction for every dataset row.
    pub predictions: Vec<String>,
}

/// Grouped cross-validation of a forest restricted to `subset`. The forest
/// seed of fold `f` depends only on `(seed, f)`, so the result is a function
/// of the set of features. An empty subset predicts the training majority.
pub fn cross_validate(data: &AasDataset, subset: &[usize], folds: &[Vec<String>], seed: u64) -> Result<CvResult> {
    if leakage(folds) > 0 {
        return Err(Error::InvalidArgument("an instance appears in several folds".to_string()));
    }
    let mut cols = subset.to_vec();
    cols.sort_unstable();
    let fold_of: BTreeMap<&str, usize> =
        folds.iter().enumerate().flat_map(|(f, ids)| ids.iter().map(move |id| (id.as_str(), f))).collect();
    let row_fold: Vec<usize> = data
        .rows
        .iter()
        .map(|r| {
            fold_of
                .get(r.instance_id.as_str())
                .copied()
                .ok_or_else(|| Error::InvalidArgument(format!("instance {} is in no fold", r.instance_id)))
        })
        .collect::<Result<_>>()?;
    let full =
        Matrix::from_rows(&data.rows.iter().map(|r| r.features.as_slice()).collect::<Vec<_>>()).select_columns(&cols);
    let base = rng::derive(seed, stream::FOREST);

    let per_fold = par::map_indices(folds.len(), |f| -> Result<(Vec<usize>, Vec<String>)> {
        let train: Vec<usize> = (0..row_fold.len()).filter(|&i| row_fold[i] != f).collect();
        let test: Vec<usize> = (0..row_fold.len()).filter(|&i| row_fold[i] == f).collect();
        if train.is_empty() || test.is_empty() {
            return Ok((test, Vec::new()));
        }
        let labels: Vec<&str> = train.iter().map(|&i| data.rows[i].label.as_str()).collect();
        let preds = if cols.is_empty() {
            let m = majority(&labels).to_string();
            vec![m; test.len()]
        } else {
            let xtrain = full.select_rows(&train);
            let imputer = MedianImputer::fit(&xtrain);
            let model =
                ForestModel::fit(&imputer.transform(&xtrain), &labels, ForestConfig::new(rng::derive(base, f as u64)))?;
            let xtest = imputer.transform(&full.select_rows(&test));
            (0..test.len()).map(|i| model.predict(xtest.row(i)).to_string()).collect()
        };
        Ok((test, preds))
    });

    let mut predictions = vec![String::new(); data.rows.len()];
    let mut acc_sum = 0.0;
    let mut used = 0;
    for fold in per_fold {
        let (test, preds) = fold?;
        if preds.is_empty() {
            continue;
        }
        let correct = test.iter().zip(&preds).filter(|(&i, p)| data.rows[i].label == **p).count();
        acc_sum += correct as f64 / test.len() as f64;
        used += 1;
        for (i, p) in test.into_iter().zip(preds) {
            predictions[i] = p;
        }
    }
    if used == 0 {
        return Err(Error::Empty("no fold with both training and test rows".to_string()));
    }
    Ok(CvResult { accuracy: acc_sum / used as f64, predictions })
}

/// Most frequent label, ties to the lexicographically smallest.
pub fn majority<'a>(labels: &[&'a str]) -> &'a str {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(l).or_default() += 1;
    }
    let mut best: Option<(&str, usize)> = None;
    for (l, c) in counts {
        if best.is_none_or(|(_, b)| c > b) {
            best = Some((l, c));
        }
    }
    best.map_or("", |(l, _)| l)
}

/// Collapses row predictions to one algorithm per instance by majority vote
/// over its repetitions.
pub fn instance_predictions(data: &AasDataset, row_predictions: &[String]) -> BTreeMap<String, String> {
    let mut votes: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (r, p) in data.rows.iter().zip(row_predictions) {
        votes.entry(&r.instance_id).or_default().push(p);
    }
    votes.into_iter().map(|(id, v)| (id.to_string(), majority(&v).to_string())).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectorEvaluation {
    /// Mean over instances of ERT of the chosen algorithm plus design cost.
    pub model_ert: f64,
    pub per_instance: BTreeMap<String, f64>,
}

/// Scores a selector: for each instance, the ERT of the predicted algorithm
/// plus the evaluations spent on the feature design.
pub fn evaluate_selector(
    predictions: &BTreeMap<String, String>,
    perf: &PerfTable,
    design_size: &BTreeMap<String, f64>,
) -> Result<SelectorEvaluation> {
    if predictions.is_empty() {
        return Err(Error::Empty("predictions".to_string()));
    }
    let mut per_instance = BTreeMap::new();
    for (inst, alg) in predictions {
        let cost = design_size
            .get(inst)
            .ok_or_else(|| Error::InvalidArgument(format!("no design size for instance {inst}")))?;
        per_instance.insert(inst.clone(), perf.ert_of(inst, alg)? + cost);
    }
    let model_ert = per_instance.values().sum::<f64>() / per_instance.len() as f64;
    Ok(SelectorEvaluation { model_ert, per_instance })
}
