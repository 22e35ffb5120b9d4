//! Comparison of encodings: per-feature correlations between the OH and TE
//! feature values, and Ward clustering of instances.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::features::{FeatureVector, FEATURE_NAMES, N_FEATURES};
use crate::{is_missing, stats, Error, Matrix, Result, MISSING};

/// Fewer aligned pairs than this give a missing coefficient.
pub const MIN_PAIRS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Correlation {
    pub feature: String,
    pub pearson: f64,
    pub spearman: f64,
    /// Pairs where both values are present.
    pub n: usize,
}

/// Pearson and Spearman correlation of two aligned series, missing when
/// fewer than [`MIN_PAIRS`] or a series is constant.
pub fn correlate(x: &[f64], y: &[f64]) -> (f64, f64, usize) {
    let (a, b): (Vec<f64>, Vec<f64>) =
        x.iter().zip(y).filter(|(u, v)| !is_missing(**u) && !is_missing(**v)).map(|(u, v)| (*u, *v)).unzip();
    if a.len() < MIN_PAIRS {
        return (MISSING, MISSING, a.len());
    }
    (stats::pearson(&a, &b).unwrap_or(MISSING), stats::spearman(&a, &b).unwrap_or(MISSING), a.len())
}

/// Aligns the two tables on `(instance_id, repetition)` and correlates
/// every feature. Both tables must hold the same keys.
pub fn encoding_correlations(te: &[FeatureVector], oh: &[FeatureVector]) -> Result<Vec<Correlation>> {
    let index = |t: &[FeatureVector]| -> Result<BTreeMap<(String, u32), [f64; N_FEATURES]>> {
        let mut m = BTreeMap::new();
        for fv in t {
            if m.insert((fv.instance_id.clone(), fv.repetition), fv.values).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate row for {} repetition {}",
                    fv.instance_id, fv.repetition
                )));
            }
        }
        Ok(m)
    };
    let (te, oh) = (index(te)?, index(oh)?);
    if te.len() != oh.len() || te.keys().zip(oh.keys()).any(|(a, b)| a != b) {
        return Err(Error::InvalidArgument("TE and OH tables cover different (instance, repetition) keys".to_string()));
    }
    Ok(FEATURE_NAMES
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let x: Vec<f64> = te.values().map(|v| v[j]).collect();
            let y: Vec<f64> = oh.values().map(|v| v[j]).collect();
            let (pearson, spearman, n) = correlate(&x, &y);
            Correlation { feature: name.to_string(), pearson, spearman, n }
        })
        .collect())
}

/// Mean of each feature over an instance's repetitions, ignoring missing
/// values. Rows come out sorted by instance id.
pub fn aggregate_repetitions(features: &[FeatureVector]) -> (Vec<String>, Matrix) {
    let mut groups: BTreeMap<&str, Vec<&FeatureVector>> = BTreeMap::new();
    for fv in features {
        groups.entry(&fv.instance_id).or_default().push(fv);
    }
    let mut m = Matrix::zeros(groups.len(), N_FEATURES);
    let mut ids = Vec::with_capacity(groups.len());
    for (i, (id, fvs)) in groups.into_iter().enumerate() {
        ids.push(id.to_string());
        for j in 0..N_FEATURES {
            let vals: Vec<f64> = fvs.iter().map(|f| f.values[j]).filter(|v| !is_missing(*v)).collect();
            m.set(i, j, if vals.is_empty() { MISSING } else { stats::mean(&vals) });
        }
    }
    (ids, m)
}

/// Replaces missing entries by the column median and z-scores each column
/// with the sample standard deviation; constant columns become 0.
pub fn standardize(x: &Matrix) -> Matrix {
    let mut out = x.clone();
    for j in 0..x.ncols() {
        let col = x.column(j);
        let present: Vec<f64> = col.iter().copied().filter(|v| !is_missing(*v)).collect();
        let fill = if present.is_empty() { 0.0 } else { stats::median(&present) };
        let col: Vec<f64> = col.into_iter().map(|v| if is_missing(v) { fill } else { v }).collect();
        let mean = stats::mean(&col);
        let sd = if col.len() > 1 { stats::sd(&col) } else { 0.0 };
        let z: Vec<f64> = col.iter().map(|v| if sd > 0.0 { (v - mean) / sd } else { 0.0 }).collect();
        out.set_column(j, &z);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// Cluster of each row, numbered by first occurrence.
    pub labels: Vec<usize>,
    /// Increase of the within-cluster sum of squares at each merge performed.
    pub merge_costs: Vec<f64>,
}

/// Agglomerative Ward clustering of the standardized rows, cut at `k`
/// clusters.
pub fn ward_cluster(x: &Matrix, k: usize) -> Result<Clustering> {
    let n = x.nrows();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("cluster count {k} must lie in [1, {n}]")));
    }
    let z = standardize(x);
    ward_on(&z, k)
}

/// Ward clustering without standardization. Distances are updated with the
/// Lance–Williams formula on squared Euclidean distances; the pair with the
/// smallest distance merges first, ties to the lowest index pair.
pub fn ward_on(x: &Matrix, k: usize) -> Result<Clustering> {
    let n = x.nrows();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("cluster count {k} must lie in [1, {n}]")));
    }
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let s: f64 = x.row(i).iter().zip(x.row(j)).map(|(a, b)| (a - b) * (a - b)).sum();
            d[i * n + j] = s;
            d[j * n + i] = s;
        }
    }
    let mut size = vec![1usize; n];
    let mut alive = vec![true; n];
    let mut owner: Vec<usize> = (0..n).collect();
    let mut merge_costs = Vec::with_capacity(n - k);

    for _ in 0..n - k {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in (0..n).filter(|&i| alive[i]) {
            for j in (i + 1..n).filter(|&j| alive[j]) {
                if best.is_none_or(|(_, _, b)| d[i * n + j] < b) {
                    best = Some((i, j, d[i * n + j]));
                }
            }
        }
        let (i, j, dij) = best.expect("at least two clusters remain");
        merge_costs.push(dij / 2.0);
        let (ni, nj) = (size[i] as f64, size[j] as f64);
        for m in (0..n).filter(|&m| alive[m] && m != i && m != j) {
            let nm = size[m] as f64;
            let v = ((ni + nm) * d[i * n + m] + (nj + nm) * d[j * n + m] - nm * dij) / (ni + nj + nm);
            d[i * n + m] = v;
            d[m * n + i] = v;
        }
        size[i] += size[j];
        alive[j] = false;
        for o in owner.iter_mut().filter(|o| **o == j) {
            *o = i;
        }
    }

    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    let labels = owner
        .iter()
        .map(|o| {
            let next = relabel.len();
            *relabel.entry(*o).or_insert(next)
        })
        .collect();
    Ok(Clustering { labels, merge_costs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::Encoding;

    #[test]
    fn correlation_examples() {
        let (p, s, n) = correlate(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]);
        assert!((p - 1.0).abs() < 1e-12 && (s - 1.0).abs() < 1e-12 && n == 3);
        let (p, s, _) = correlate(&[1.0, 2.0, 3.0], &[1.0, 4.0, 9.0]);
        assert!(p < 1.0 && (s - 1.0).abs() < 1e-12);
        let (p, s, _) = correlate(&[1.0, 2.0, 3.0], &[-1.0, -2.0, -3.0]);
        assert!((p + 1.0).abs() < 1e-12 && (s + 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlation_degenerate() {
        let (p, s, n) = correlate(&[1.0, 2.0], &[1.0, 2.0]);
        assert!(is_missing(p) && is_missing(s) && n == 2);
        let (p, _, n) = correlate(&[1.0, MISSING, 3.0, 4.0], &[1.0, 2.0, 3.0, 4.0]);
        assert!((p - 1.0).abs() < 1e-12 && n == 3);
        assert!(is_missing(correlate(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).0));
    }

    fn fv(id: &str, rep: u32, enc: Encoding, v: f64) -> FeatureVector {
        FeatureVector { values: [v; N_FEATURES], instance_id: id.into(), encoding: enc, repetition: rep, cost: 1 }
    }

    #[test]
    fn aligned_tables() {
        let te: Vec<FeatureVector> = (0..5).map(|i| fv("a", i, Encoding::Target, i as f64)).collect();
        let oh: Vec<FeatureVector> = (0..5).rev().map(|i| fv("a", i, Encoding::OneHot, 2.0 * i as f64)).collect();
        let r = encoding_correlations(&te, &oh).unwrap();
        assert_eq!(r.len(), N_FEATURES);
        assert!(r.iter().all(|c| (c.pearson - 1.0).abs() < 1e-12 && c.n == 5));
        assert!(encoding_correlations(&te, &oh[..4]).is_err());
    }

    #[test]
    fn aggregation_ignores_missing() {
        let mut a = fv("x", 0, Encoding::Target, 1.0);
        a.values[0] = MISSING;
        let b = fv("x", 1, Encoding::Target, 3.0);
        let (ids, m) = aggregate_repetitions(&[a, b, fv("w", 0, Encoding::Target, 5.0)]);
        assert_eq!(ids, ["w", "x"]);
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.get(1, 1), 2.0);
        assert_eq!(m.get(0, 5), 5.0);
    }

    #[test]
    fn standardize_columns() {
        let z = standardize(&Matrix::from_rows(&[[1.0, 7.0, MISSING], [2.0, 7.0, 4.0], [3.0, 7.0, 6.0]]));
        assert_eq!(z.column(0), vec![-1.0, 0.0, 1.0]);
        assert_eq!(z.column(1), vec![0.0; 3]);
        assert!((stats::mean(&z.column(2))).abs() < 1e-12);
    }

    #[test]
    fn trivial_cuts() {
        let x = Matrix::from_rows(&[[0.0], [1.0], [5.0], [6.0]]);
        assert_eq!(ward_cluster(&x, 1).unwrap().labels, vec![0; 4]);
        assert_eq!(ward_cluster(&x, 4).unwrap().labels, vec![0, 1, 2, 3]);
        assert_eq!(ward_cluster(&x, 2).unwrap().labels, vec![0, 0, 1, 1]);
        assert!(ward_cluster(&x, 0).is_err());
        assert!(ward_cluster(&x, 5).is_err());
    }

    #[test]
    fn merge_cost_is_sse_increase() {
        // Merging {0} and {2} costs 1·1/2·4 = 2; then {0,2} with {10}:
        // 2·1/3·(10−1)² = 54.
        let c = ward_on(&Matrix::from_rows(&[[0.0], [2.0], [10.0]]), 1).unwrap();
        assert!((c.merge_costs[0] - 2.0).abs() < 1e-12);
        assert!((c.merge_costs[1] - 54.0).abs() < 1e-12);
    }
}
