//! Nearest-better clustering features.

use alloc::vec::Vec;

use crate::matrix::euclidean;
use crate::{stats, Error, Matrix, Result, MISSING};

/// Distances of every point to its nearest neighbour and nearest better
/// neighbour (strictly smaller objective). Ties resolve to the lowest index.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestBetter {
    pub nn: Vec<f64>,
    /// `None` for points without a strictly better point.
    pub nb: Vec<Option<(usize, f64)>>,
}

pub fn nearest_better(x: &Matrix, y: &[f64]) -> NearestBetter {
    let n = x.nrows();
    let mut nn = alloc::vec![f64::INFINITY; n];
    let mut nb: Vec<Option<(usize, f64)>> = alloc::vec![None; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = euclidean(x.row(i), x.row(j));
            if d < nn[i] {
                nn[i] = d;
            }
            if y[j] < y[i] && nb[i].is_none_or(|(_, b)| d < b) {
                nb[i] = Some((j, d));
            }
        }
    }
    NearestBetter { nn, nb }
}

impl NearestBetter {
    /// Number of points choosing each point as their nearest better neighbour.
    pub fn indegree(&self) -> Vec<usize> {
        let mut deg = alloc::vec![0; self.nn.len()];
        for (j, _) in self.nb.iter().flatten() {
            deg[*j] += 1;
        }
        deg
    }
}

/// `[nn_nb.sd_ratio, nn_nb.mean_ratio, nn_nb.cor, dist_ratio.coeff_var,
/// nb_fitness.cor]`. Points without a better neighbour are left out of the
/// distance statistics; sample standard deviations are used.
pub fn nbc(x: &Matrix, y: &[f64]) -> Result<[f64; 5]> {
    if y.len() < 3 {
        return Err(Error::InvalidArgument(alloc::format!("nbc needs n >= 3, got {}", y.len())));
    }
    let (lo, hi) = stats::min_max(y);
    if lo == hi {
        return Err(Error::InvalidArgument("nbc needs a non-constant objective".into()));
    }
    let graph = nearest_better(x, y);
    let (nn, nb): (Vec<f64>, Vec<f64>) =
        graph.nn.iter().zip(&graph.nb).filter_map(|(a, b)| b.map(|(_, d)| (*a, d))).unzip();
    let ratio = |a: f64, b: f64| if b > 0.0 && a.is_finite() { a / b } else { MISSING };
    let many = nn.len() >= 2;
    let sd_ratio = if many { ratio(stats::sd(&nn), stats::sd(&nb)) } else { MISSING };
    let mean_ratio = ratio(stats::mean(&nn), stats::mean(&nb));
    let cor = stats::pearson(&nn, &nb).unwrap_or(MISSING);
    let per_point: Vec<f64> = nn.iter().zip(&nb).filter(|(_, b)| **b > 0.0).map(|(a, b)| a / b).collect();
    let coeff_var = if per_point.len() >= 2 { ratio(stats::sd(&per_point), stats::mean(&per_point)) } else { MISSING };
    let deg: Vec<f64> = graph.indegree().into_iter().map(|d| d as f64).collect();
    let fitness_cor = stats::pearson(&deg, y).unwrap_or(MISSING);
    Ok([sd_ratio, mean_ratio, cor, coeff_var, fitness_cor])
}
