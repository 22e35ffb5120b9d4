//! `ela_meta`: goodness of fit of linear and quadratic regression models.

use alloc::vec::Vec;

use crate::linalg::{least_squares, RANK_TOL};
use crate::{stats, Matrix, MISSING};

pub const NAMES: [&str; 9] = [
    "lin_simple.adj_r2",
    "lin_simple.intercept",
    "lin_simple.coef.min",
    "lin_simple.coef.max",
    "lin_simple.coef.max_by_min",
    "lin_w_interact.adj_r2",
    "quad_simple.adj_r2",
    "quad_simple.cond",
    "quad_w_interact.adj_r2",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Model {
    Linear,
    LinearInteract,
    Quadratic,
    QuadraticInteract,
}

/// Model matrix with leading intercept column. Term order: linear terms,
/// then squares, then pairwise products `x_i x_j (i < j)`.
fn model_matrix(x: &Matrix, model: Model) -> Matrix {
    let d = x.ncols();
    let squares = matches!(model, Model::Quadratic | Model::QuadraticInteract);
    let interact = matches!(model, Model::LinearInteract | Model::QuadraticInteract);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(x.nrows());
    for r in x.rows_iter() {
        let mut row = Vec::with_capacity(1 + 2 * d + d * d.saturating_sub(1) / 2);
        row.push(1.0);
        row.extend_from_slice(r);
        if squares {
            row.extend(r.iter().map(|v| v * v));
        }
        if interact {
            for i in 0..d {
                for j in i + 1..d {
                    row.push(r[i] * r[j]);
                }
            }
        }
        rows.push(row);
    }
    Matrix::from_rows(&rows)
}

struct Fit {
    adj_r2: f64,
    coefficients: Vec<Option<f64>>,
}

fn fit(x: &Matrix, y: &[f64], model: Model) -> Option<Fit> {
    let mm = model_matrix(x, model);
    let n = y.len();
    if n <= mm.ncols() {
        return None;
    }
    let ls = least_squares(&mm, y, RANK_TOL)?;
    let m = stats::mean(y);
    let tss: f64 = y.iter().map(|v| (v - m) * (v - m)).sum();
    let predictors = ls.rank - 1;
    let adj_r2 = if tss > 0.0 && n > predictors + 1 {
        let r2 = 1.0 - ls.rss / tss;
        1.0 - (1.0 - r2) * (n - 1) as f64 / (n - predictors - 1) as f64
    } else {
        MISSING
    };
    Some(Fit { adj_r2, coefficients: ls.coefficients })
}

fn abs_range(coefs: &[Option<f64>]) -> Option<(f64, f64)> {
    let abs: Vec<f64> = coefs.iter().flatten().map(|c| c.abs()).collect();
    if abs.is_empty() {
        return None;
    }
    Some(stats::min_max(&abs))
}

fn ratio(max: f64, min: f64) -> f64 {
    if min > 0.0 {
        max / min
    } else {
        MISSING
    }
}

/// Computes the nine `ela_meta` features in the order of [`NAMES`].
/// Coefficients of aliased (collinear) terms are left out of the
/// coefficient statistics.
pub fn ela_meta(x: &Matrix, y: &[f64]) -> [f64; 9] {
    let d = x.ncols();
    let mut out = [MISSING; 9];
    if let Some(lin) = fit(x, y, Model::Linear) {
        out[0] = lin.adj_r2;
        out[1] = lin.coefficients[0].unwrap_or(MISSING);
        if let Some((min, max)) = abs_range(&lin.coefficients[1..=d]) {
            out[2] = min;
            out[3] = max;
            out[4] = ratio(max, min);
        }
    }
    if let Some(f) = fit(x, y, Model::LinearInteract) {
        out[5] = f.adj_r2;
    }
    if let Some(quad) = fit(x, y, Model::Quadratic) {
        out[6] = quad.adj_r2;
        if let Some((min, max)) = abs_range(&quad.coefficients[d + 1..=2 * d]) {
            out[7] = ratio(max, min);
        }
    }
    if let Some(f) = fit(x, y, Model::QuadraticInteract) {
        out[8] = f.adj_r2;
    }
    out
}
