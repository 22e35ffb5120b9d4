//! Dispersion: spread of the best points compared with the whole sample.

use alloc::vec::Vec;

use crate::matrix::euclidean;
use crate::{stats, Matrix, MISSING};

pub const QUANTILES: [f64; 4] = [0.02, 0.05, 0.10, 0.25];

/// Pairwise Euclidean distances among `idx` (upper triangle).
fn pair_distances(x: &Matrix, idx: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(idx.len() * idx.len().saturating_sub(1) / 2);
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            out.push(euclidean(x.row(i), x.row(j)));
        }
    }
    out
}

/// `[ratio_mean, ratio_median, diff_mean, diff_median]` for the subset of
/// points whose objective is at most the `q`-quantile.
pub fn dispersion_at(x: &Matrix, y: &[f64], q: f64) -> [f64; 4] {
    let all: Vec<usize> = (0..y.len()).collect();
    let full = pair_distances(x, &all);
    subset_dispersion(x, y, q, &full)
}

fn subset_dispersion(x: &Matrix, y: &[f64], q: f64, full: &[f64]) -> [f64; 4] {
    if full.is_empty() {
        return [MISSING; 4];
    }
    let threshold = stats::quantile(y, q);
    let subset: Vec<usize> = (0..y.len()).filter(|&i| y[i] <= threshold).collect();
    if subset.len() < 2 {
        return [MISSING; 4];
    }
    let sub = pair_distances(x, &subset);
    let (mean_full, median_full) = (stats::mean(full), stats::median(full));
    let (mean_sub, median_sub) = (stats::mean(&sub), stats::median(&sub));
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { MISSING };
    [ratio(mean_sub, mean_full), ratio(median_sub, median_full), mean_sub - mean_full, median_sub - median_full]
}

/// Sixteen features: `ratio_mean_*`, `ratio_median_*`, `diff_mean_*`,
/// `diff_median_*`, each over [`QUANTILES`].
pub fn dispersion(x: &Matrix, y: &[f64]) -> [f64; 16] {
    let all: Vec<usize> = (0..y.len()).collect();
    let full = pair_distances(x, &all);
    let mut out = [MISSING; 16];
    for (k, &q) in QUANTILES.iter().enumerate() {
        let v = subset_dispersion(x, y, q, &full);
        for (stat, value) in v.iter().enumerate() {
            out[stat * QUANTILES.len() + k] = *value;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::is_missing;
    use rand::{Rng, SeedableRng};

    fn uniform(n: usize, d: usize, seed: u64) -> Matrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let data = (0..n * d).map(|_| rng.gen::<f64>()).collect();
        Matrix::from_vec(n, d, data)
    }

    #[test]
    fn no_structure_means_no_dispersion_signal() {
        let x = uniform(1000, 5, 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let y: Vec<f64> = (0..1000).map(|_| rng.gen()).collect();
        let f = dispersion(&x, &y);
        for v in &f[..8] {
            assert!((v - 1.0).abs() < 0.1, "ratio {v}");
        }
        for v in &f[8..] {
            assert!(v.abs() < 0.05, "diff {v}");
        }
    }

    #[test]
    fn funnel_concentrates_best_points() {
        let x = uniform(400, 3, 3);
        let y: Vec<f64> = x.rows_iter().map(|r| r.iter().map(|v| (v - 0.5) * (v - 0.5)).sum()).collect();
        let f = dispersion(&x, &y);
        assert!(f[0] < 1.0, "ratio_mean_02 {}", f[0]);
        assert!(f[8] < 0.0, "diff_mean_02 {}", f[8]);
    }

    #[test]
    fn full_subset_is_neutral() {
        let x = uniform(30, 2, 4);
        let y: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let [rm, rmed, dm, dmed] = dispersion_at(&x, &y, 1.0);
        assert_eq!((rm, rmed, dm, dmed), (1.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn tiny_subset_is_missing() {
        let x = uniform(20, 2, 5);
        let y: Vec<f64> = (0..20).map(|i| i as f64).collect();
        // Of 20 distinct values, the 0.02- and 0.05-quantiles keep a single
        // point, the 0.10-quantile keeps two.
        let f = dispersion(&x, &y);
        for k in [0, 1, 4, 5, 8, 9, 12, 13] {
            assert!(is_missing(f[k]));
        }
        assert!(!is_missing(f[2]));
    }
}
