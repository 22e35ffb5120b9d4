//! CART classification trees and a bagged random forest.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::rng::{self, stream};
use crate::{par, Error, Matrix, Result};

pub const DEFAULT_TREES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub seed: u64,
}

impl ForestConfig {
    pub fn new(seed: u64) -> Self {
        ForestConfig { n_trees: DEFAULT_TREES, seed }
    }

    /// Number of split candidates for `p` features, `⌈√p⌉`.
    pub fn max_features(p: usize) -> usize {
        let mut m = libm::sqrt(p as f64) as usize;
        while m * m < p {
            m += 1;
        }
        m.max(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf { class: usize },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    pub fn predict(&self, row: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { class } => return class,
                Node::Split { feature, threshold, left, right } => {
                    at = if row[feature] <= threshold { left } else { right };
                }
            }
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }
}

/// Index of the largest count, ties to the lowest index.
fn argmax(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

fn gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n) * (c as f64 / n)).sum::<f64>()
}

struct Grower<'a> {
    x: &'a Matrix,
    y: &'a [usize],
    n_classes: usize,
    mtry: usize,
    rng: rng::Rng,
    nodes: Vec<Node>,
}

impl Grower<'_> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut c = vec![0; self.n_classes];
        for &i in idx {
            c[self.y[i]] += 1;
        }
        c
    }

    /// Best threshold on `feature`: `(weighted gini, threshold)`, or `None`
    /// if the feature is constant on `idx`.
    fn best_threshold(&self, idx: &[usize], feature: usize) -> Option<(f64, f64)> {
        let mut order: Vec<(f64, usize)> = idx.iter().map(|&i| (self.x.get(i, feature), self.y[i])).collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        if order[0].0 == order[order.len() - 1].0 {
            return None;
        }
        let n = order.len();
        let mut right = vec![0; self.n_classes];
        for &(_, c) in &order {
            right[c] += 1;
        }
        let mut left = vec![0; self.n_classes];
        let mut best: Option<(f64, f64)> = None;
        for s in 1..n {
            let c = order[s - 1].1;
            left[c] += 1;
            right[c] -= 1;
            let (a, b) = (order[s - 1].0, order[s].0);
            if a == b {
                continue;
            }
            let score = (s as f64 * gini(&left, s) + (n - s) as f64 * gini(&right, n - s)) / n as f64;
            if best.is_none_or(|(g, _)| score < g) {
                let mid = a + (b - a) / 2.0;
                best = Some((score, if mid < b { mid } else { a }));
            }
        }
        best
    }

    fn grow(&mut self, idx: Vec<usize>) -> usize {
        let at = self.nodes.len();
        let counts = self.counts(&idx);
        self.nodes.push(Node::Leaf { class: argmax(&counts) });
        if idx.len() < 2 || counts.iter().filter(|&&c| c > 0).count() < 2 {
            return at;
        }
        // Draw candidates in random order until `mtry` non-constant ones
        // have been scored.
        let mut features: Vec<usize> = (0..self.x.ncols()).collect();
        features.shuffle(&mut self.rng);
        let mut scored = 0;
        let mut best: Option<(f64, usize, f64)> = None;
        for f in features {
            if scored == self.mtry {
                break;
            }
            if let Some((score, threshold)) = self.best_threshold(&idx, f) {
                scored += 1;
                if best.is_none_or(|(g, _, _)| score < g) {
                    best = Some((score, f, threshold));
                }
            }
        }
        let Some((_, feature, threshold)) = best else {
            return at;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| self.x.get(i, feature) <= threshold);
        let left = self.grow(l);
        let right = self.grow(r);
        self.nodes[at] = Node::Split { feature, threshold, left, right };
        at
    }
}

fn fit_tree(x: &Matrix, y: &[usize], n_classes: usize, seed: u64) -> Tree {
    let mut rng = rng::rng(seed);
    let n = y.len();
    let sample: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let mut g = Grower { x, y, n_classes, mtry: ForestConfig::max_features(x.ncols()), rng, nodes: Vec::new() };
    g.grow(sample);
    Tree { nodes: g.nodes }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestModel {
    pub trees: Vec<Tree>,
    /// Sorted class labels; tree outputs index into this.
    pub classes: Vec<String>,
    pub n_features: usize,
    pub config: ForestConfig,
}

impl ForestModel {
    /// Fits `config.n_trees` trees on bootstrap samples. `x` must be free of
    /// missing values.
    pub fn fit(x: &Matrix, labels: &[&str], config: ForestConfig) -> Result<ForestModel> {
        if labels.is_empty() || x.nrows() == 0 {
            return Err(Error::Empty("training data".to_string()));
        }
        if labels.len() != x.nrows() {
            return Err(Error::LengthMismatch { expected: x.nrows(), got: labels.len() });
        }
        if config.n_trees == 0 {
            return Err(Error::InvalidArgument("forest needs at least one tree".to_string()));
        }
        if x.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("training features must be imputed before fitting".to_string()));
        }
        let mut classes: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        classes.sort();
        classes.dedup();
        let y: Vec<usize> = labels.iter().map(|l| classes.binary_search_by(|c| c.as_str().cmp(l)).unwrap()).collect();
        let base = rng::derive(config.seed, stream::FOREST);
        let trees = par::map_indices(config.n_trees, |t| fit_tree(x, &y, classes.len(), rng::derive(base, t as u64)));
        Ok(ForestModel { trees, classes, n_features: x.ncols(), config })
    }

    /// Majority vote over trees, ties to the lexicographically smallest class.
    pub fn predict(&self, row: &[f64]) -> &str {
        let mut votes = vec![0; self.classes.len()];
        for t in &self.trees {
            votes[t.predict(row)] += 1;
        }
        &self.classes[argmax(&votes)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};

    fn blobs(n: usize, sep: f64, seed: u64) -> (Matrix, Vec<&'static str>) {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, 1.0).unwrap();
        let mut data = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let c = i % 2;
            data.push(noise.sample(&mut r) + sep * c as f64);
            data.push(noise.sample(&mut r));
            labels.push(if c == 0 { "a" } else { "b" });
        }
        (Matrix::from_vec(n, 2, data), labels)
    }

    #[test]
    fn max_features_is_ceil_sqrt() {
        assert_eq!([1, 2, 4, 5, 9, 10, 40].map(ForestConfig::max_features), [1, 2, 2, 3, 3, 4, 7]);
    }

    #[test]
    fn separates_blobs() {
        let (x, y) = blobs(200, 5.0, 1);
        let (xt, yt) = blobs(200, 5.0, 2);
        let m = ForestModel::fit(&x, &y, ForestConfig::new(0)).unwrap();
        let correct = (0..200).filter(|&i| m.predict(xt.row(i)) == yt[i]).count();
        assert!(correct >= 190, "{correct}/200");
    }

    #[test]
    fn single_class() {
        let x = Matrix::from_rows(&[[1.0], [2.0], [3.0]]);
        let m = ForestModel::fit(&x, &["z", "z", "z"], ForestConfig::new(0)).unwrap();
        assert_eq!(m.predict(&[10.0]), "z");
        assert!(m.trees.iter().all(|t| t.n_nodes() == 1));
    }

    #[test]
    fn deterministic_per_seed() {
        let (x, y) = blobs(100, 1.0, 3);
        let a = ForestModel::fit(&x, &y, ForestConfig::new(9)).unwrap();
        let b = ForestModel::fit(&x, &y, ForestConfig::new(9)).unwrap();
        assert_eq!(a, b);
        let (probe, _) = blobs(50, 1.0, 4);
        let pa: Vec<&str> = (0..50).map(|i| a.predict(probe.row(i))).collect();
        let pb: Vec<&str> = (0..50).map(|i| b.predict(probe.row(i))).collect();
        assert_eq!(pa, pb);
    }

    #[test]
    fn fits_training_data_when_separable() {
        // Without bootstrap noise a single tree would be exact; the forest
        // vote still recovers every training point here.
        let x = Matrix::from_rows(&[[0.0], [1.0], [2.0], [3.0], [4.0], [5.0]]);
        let y = ["a", "a", "a", "b", "b", "b"];
        let m = ForestModel::fit(&x, &y, ForestConfig::new(1)).unwrap();
        for (i, label) in y.iter().enumerate() {
            assert_eq!(m.predict(x.row(i)), *label);
        }
    }

    #[test]
    fn predictions_come_from_training_classes() {
        let (x, y) = blobs(60, 0.5, 5);
        let m = ForestModel::fit(&x, &y, ForestConfig::new(2)).unwrap();
        for v in [-100.0, 0.0, 100.0] {
            assert!(["a", "b"].contains(&m.predict(&[v, v])));
        }
    }

    #[test]
    fn rejects_bad_input() {
        let x = Matrix::from_rows(&[[f64::NAN], [1.0]]);
        assert!(ForestModel::fit(&x, &["a", "b"], ForestConfig::new(0)).is_err());
        assert!(ForestModel::fit(&Matrix::zeros(0, 1), &[], ForestConfig::new(0)).is_err());
        assert!(ForestModel::fit(&Matrix::zeros(2, 1), &["a"], ForestConfig::new(0)).is_err());
    }

    #[test]
    fn tie_goes_to_smallest_class() {
        assert_eq!(argmax(&[2, 3, 3]), 1);
        assert_eq!(argmax(&[0, 0]), 0);
    }
}
