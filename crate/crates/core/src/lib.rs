//! Exploratory landscape analysis for mixed-variable optimization problems.
//!
//! The crate covers the whole chain from a typed search space with
//! hierarchical (conditional) variables to landscape features and an
//! algorithm-selection layer:
//!
//! * [`space`] and [`problems`]: search spaces, activity of conditioned
//!   variables, built-in closed-form test problems.
//! * [`sampling`]: uniform random designs and imputation of inactive entries.
//! * [`encoding`]: objective/decision normalization, one-hot and target
//!   encoding of categorical variables.
//! * [`features`]: `ela_distr`, `ela_meta`, dispersion, information content
//!   and nearest-better-clustering features.
//! * [`performance`]: expected running time, PAR10, SBS/VBS summaries.
//! * [`selection`]: grouped cross-validation, random forest, greedy
//!   forward-backward feature selection, selector evaluation.
//! * [`analysis`]: encoding correlations and Ward clustering.
//!
//! The crate is `no_std` and only needs `alloc`. Enabling the `parallel`
//! feature runs forest fitting and cross-validation on rayon; results do not
//! depend on the schedule.
#![no_std]

extern crate alloc;
#[cfg(any(test, feature = "parallel"))]
extern crate std;

pub mod analysis;
pub mod encoding;
mod error;
pub mod features;
pub mod linalg;
pub mod matrix;
mod par;
pub mod performance;
pub mod problems;
pub mod rng;
pub mod sampling;
pub mod selection;
pub mod space;
pub mod stats;

pub use error::{Error, Result};
pub use matrix::Matrix;

/// Marker for a feature value that is mathematically undefined on a sample.
///
/// Stored as NaN; test with [`is_missing`].
pub const MISSING: f64 = f64::NAN;

#[inline]
pub fn is_missing(v: f64) -> bool {
    v.is_nan()
}
