//! Landscape features of an encoded sample.
//!
//! A [`FeatureVector`] holds 40 values in the order of [`FEATURE_NAMES`]:
//! 3 `ela_distr`, 9 `ela_meta`, 16 dispersion, 5 information content and
//! 5 nearest-better-clustering features, then the proportion of categorical
//! variables and the dimension of the raw search space. Undefined values are
//! [`MISSING`](crate::MISSING).

pub mod dispersion;
pub mod distr;
pub mod ic;
pub mod meta;
pub mod nbc;

use alloc::string::String;
use alloc::vec::Vec;

use crate::encoding::{preprocess, EncodedSample, Encoding};
use crate::rng::{self, stream};
use crate::sampling::{sample_design, Design};
use crate::space::{Problem, SearchSpace};
use crate::{Result, MISSING};

pub const N_FEATURES: usize = 40;

pub const FEATURE_NAMES: [&str; N_FEATURES] = [
    "ela_distr.skewness",
    "ela_distr.kurtosis",
    "ela_distr.number_of_peaks",
    "ela_meta.lin_simple.adj_r2",
    "ela_meta.lin_simple.intercept",
    "ela_meta.lin_simple.coef.min",
    "ela_meta.lin_simple.coef.max",
    "ela_meta.lin_simple.coef.max_by_min",
    "ela_meta.lin_w_interact.adj_r2",
    "ela_meta.quad_simple.adj_r2",
    "ela_meta.quad_simple.cond",
    "ela_meta.quad_w_interact.adj_r2",
    "disp.ratio_mean_02",
    "disp.ratio_mean_05",
    "disp.ratio_mean_10",
    "disp.ratio_mean_25",
    "disp.ratio_median_02",
    "disp.ratio_median_05",
    "disp.ratio_median_10",
    "disp.ratio_median_25",
    "disp.diff_mean_02",
    "disp.diff_mean_05",
    "disp.diff_mean_10",
    "disp.diff_mean_25",
    "disp.diff_median_02",
    "disp.diff_median_05",
    "disp.diff_median_10",
    "disp.diff_median_25",
    "ic.h_max",
    "ic.eps_s",
    "ic.eps_max",
    "ic.eps_ratio",
    "ic.m0",
    "nbc.nn_nb.sd_ratio",
    "nbc.nn_nb.mean_ratio",
    "nbc.nn_nb.cor",
    "nbc.dist_ratio.coeff_var",
    "nbc.nb_fitness.cor",
    "cat_proportion",
    "dimension",
];

pub fn feature_index(name: &str) -> Option<usize> {
    FEATURE_NAMES.iter().position(|n| *n == name)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: [f64; N_FEATURES],
    pub instance_id: String,
    pub encoding: Encoding,
    pub repetition: u32,
    /// Function evaluations spent on the initial design.
    pub cost: usize,
}

impl FeatureVector {
    pub fn get(&self, name: &str) -> Option<f64> {
        feature_index(name).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        FEATURE_NAMES.iter().copied().zip(self.values.iter().copied())
    }
}

/// The 38 landscape features of an encoded sample; `seed` drives the
/// information-content walk.
pub fn landscape_features(sample: &EncodedSample, seed: u64) -> Result<[f64; 38]> {
    let x = &sample.matrix;
    let y = &sample.y;
    let mut out = [MISSING; 38];
    out[..3].copy_from_slice(&distr::ela_distr(y)?);
    out[3..12].copy_from_slice(&meta::ela_meta(x, y));
    out[12..28].copy_from_slice(&dispersion::dispersion(x, y));
    out[28..33].copy_from_slice(&ic::information_content(x, y, seed));
    // A constant objective has no nearest-better relation; nbc stays missing.
    if let Ok(v) = nbc::nbc(x, y) {
        out[33..38].copy_from_slice(&v);
    }
    Ok(out)
}

/// Preprocesses an existing design and computes all 40 features.
pub fn featurize_design(design: &Design, space: &SearchSpace, encoding: Encoding, seed: u64) -> Result<FeatureVector> {
    let sample = preprocess(design, space, encoding, seed)?;
    let ela = landscape_features(&sample, rng::derive(seed, stream::WALK))?;
    let mut values = [MISSING; N_FEATURES];
    values[..38].copy_from_slice(&ela);
    values[38] = space.n_categorical() as f64 / space.dim() as f64;
    values[39] = space.dim() as f64;
    Ok(FeatureVector { values, instance_id: space.name.clone(), encoding, repetition: 0, cost: design.len() })
}

/// Samples `n` points uniformly, preprocesses them and computes all 40
/// features. The sampling, imputation and walk streams all derive from
/// `seed`.
pub fn featurize(problem: &Problem, encoding: Encoding, n: usize, seed: u64) -> Result<FeatureVector> {
    let design = sample_design(problem, n, seed)?;
    featurize_design(&design, problem.space(), encoding, seed)
}

/// Feature vectors for every repetition of one problem and encoding.
pub fn featurize_repetitions(
    problem: &Problem,
    encoding: Encoding,
    n: usize,
    repetitions: u32,
    seed: u64,
) -> Result<Vec<FeatureVector>> {
    let base = rng::derive(seed, rng::hash_str(problem.name()));
    crate::par::map_indices(repetitions as usize, |r| {
        let mut fv = featurize(problem, encoding, n, rng::derive(base, r as u64))?;
        fv.repetition = r as u32;
        Ok(fv)
    })
    .into_iter()
    .collect()
}
