//! Greedy forward selection with conditional backward removals.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{cross_validate, grouped_kfold, AasDataset};
use crate::{par, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Add(usize),
    Remove(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    /// Selected feature indices in inclusion order.
    pub subset: Vec<usize>,
    /// Accepted steps with the accuracy reached after each.
    pub steps: Vec<(Step, f64)>,
    /// Accuracy of the empty model.
    pub baseline: f64,
    pub accuracy: f64,
    /// Number of distinct subsets cross-validated.
    pub evaluations: usize,
    pub folds: Vec<Vec<String>>,
}

struct Evaluator<'a> {
    data: &'a AasDataset,
    folds: Vec<Vec<String>>,
    seed: u64,
    cache: BTreeMap<Vec<usize>, f64>,
    limit: usize,
}

impl Evaluator<'_> {
    fn key(subset: &[usize]) -> Vec<usize> {
        let mut k = subset.to_vec();
        k.sort_unstable();
        k
    }

    /// Accuracies of the given subsets, or `None` once the evaluation
    /// budget would be exceeded.
    fn score(&mut self, subsets: &[Vec<usize>]) -> Result<Option<Vec<f64>>> {
        let fresh: Vec<Vec<usize>> = {
            let mut f: Vec<Vec<usize>> =
                subsets.iter().map(|s| Self::key(s)).filter(|k| !self.cache.contains_key(k)).collect();
            f.sort();
            f.dedup();
            f
        };
        if self.cache.len() + fresh.len() > self.limit {
            return Ok(None);
        }
        let (data, folds, seed) = (self.data, &self.folds, self.seed);
        let results = par::map_indices(fresh.len(), |i| cross_validate(data, &fresh[i], folds, seed));
        for (k, r) in fresh.into_iter().zip(results) {
            self.cache.insert(k, r?.accuracy);
        }
        Ok(Some(subsets.iter().map(|s| self.cache[&Self::key(s)]).collect()))
    }
}

/// Index and value of the largest entry, ties to the first.
fn best(scores: &[f64]) -> Option<(usize, f64)> {
    let mut out: Option<(usize, f64)> = None;
    for (i, &s) in scores.iter().enumerate() {
        if out.is_none_or(|(_, b)| s > b) {
            out = Some((i, s));
        }
    }
    out
}

/// Starts from the empty set. Each round adds the absent feature with the
/// best grouped-CV accuracy if it strictly improves, then removes single
/// features while a removal strictly improves. Ties go to the lowest feature
/// index. At most `2·p·(p+1)` subsets are cross-validated.
pub fn greedy_select(data: &AasDataset, k: usize, seed: u64) -> Result<Selection> {
    let p = data.n_features();
    if p == 0 {
        return Err(Error::InvalidArgument("no features to select from".into()));
    }
    let folds = grouped_kfold(&data.instance_ids(), k, seed)?;
    let mut ev = Evaluator { data, folds, seed, cache: BTreeMap::new(), limit: 2 * p * (p + 1) };
    let baseline = ev.score(&[Vec::new()])?.expect("budget covers the empty model")[0];
    let mut current = baseline;
    let mut subset: Vec<usize> = Vec::new();
    let mut steps = Vec::new();

    'outer: loop {
        let absent: Vec<usize> = (0..p).filter(|j| !subset.contains(j)).collect();
        if absent.is_empty() {
            break;
        }
        let candidates: Vec<Vec<usize>> = absent
            .iter()
            .map(|&j| {
                let mut s = subset.clone();
                s.push(j);
                s
            })
            .collect();
        let Some(scores) = ev.score(&candidates)? else { break };
        match best(&scores) {
            Some((i, acc)) if acc > current => {
                subset.push(absent[i]);
                current = acc;
                steps.push((Step::Add(absent[i]), acc));
            }
            _ => break,
        }
        while subset.len() > 1 {
            let mut by_index: Vec<usize> = subset.clone();
            by_index.sort_unstable();
            let candidates: Vec<Vec<usize>> =
                by_index.iter().map(|&j| subset.iter().copied().filter(|&x| x != j).collect()).collect();
            let Some(scores) = ev.score(&candidates)? else { break 'outer };
            match best(&scores) {
                Some((i, acc)) if acc > current => {
                    let j = by_index[i];
                    subset.retain(|&x| x != j);
                    current = acc;
                    steps.push((Step::Remove(j), acc));
                }
                _ => break,
            }
        }
    }
    Ok(Selection { subset, steps, baseline, accuracy: current, evaluations: ev.cache.len(), folds: ev.folds })
}
