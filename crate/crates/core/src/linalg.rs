//! Least squares through Householder QR with limited column pivoting.
//!
//! Columns are processed in their given order. A column whose remaining
//! norm, after the reflections of the accepted columns, drops below
//! `tol` times its original norm is treated as aliased: it gets no
//! coefficient and the fit proceeds on the other columns. This keeps the
//! intercept and earlier terms when later terms are collinear with them
//! (for example one-hot blocks next to an intercept, or `x²` of a 0/1 column).

use alloc::vec;
use alloc::vec::Vec;

use crate::Matrix;

/// Relative tolerance for declaring a column aliased.
pub const RANK_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    /// One entry per input column; `None` for aliased columns.
    pub coefficients: Vec<Option<f64>>,
    pub rank: usize,
    /// Residual sum of squares.
    pub rss: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `min ‖X b − y‖²`. Returns `None` if `X` has no rows.
pub fn least_squares(x: &Matrix, y: &[f64], tol: f64) -> Option<LeastSquares> {
    let n = x.nrows();
    let p = x.ncols();
    if n == 0 || y.len() != n {
        return None;
    }
    let mut cols: Vec<Vec<f64>> = (0..p).map(|j| x.column(j)).collect();
    let orig_norm: Vec<f64> = cols.iter().map(|c| libm::sqrt(dot(c, c))).collect();
    let mut b = y.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut k = 0;

    for j in 0..p {
        if k >= n {
            break;
        }
        let tail_norm = libm::sqrt(dot(&cols[j][k..], &cols[j][k..]));
        if orig_norm[j] == 0.0 || tail_norm <= tol * orig_norm[j] {
            continue;
        }
        let x0 = cols[j][k];
        let alpha = if x0 >= 0.0 { -tail_norm } else { tail_norm };
        let mut v: Vec<f64> = cols[j][k..].to_vec();
        v[0] -= alpha;
        let vv = dot(&v, &v);
        if vv > 0.0 {
            for c in cols.iter_mut().skip(j + 1) {
                let s = 2.0 * dot(&v, &c[k..]) / vv;
                for (ci, vi) in c[k..].iter_mut().zip(&v) {
                    *ci -= s * vi;
                }
            }
            let s = 2.0 * dot(&v, &b[k..]) / vv;
            for (bi, vi) in b[k..].iter_mut().zip(&v) {
                *bi -= s * vi;
            }
        }
        cols[j][k] = alpha;
        for ci in cols[j][k + 1..].iter_mut() {
            *ci = 0.0;
        }
        pivots.push(j);
        k += 1;
    }

    // Back substitution on the accepted columns.
    let rank = pivots.len();
    let mut sol = vec![0.0; rank];
    for r in (0..rank).rev() {
        let mut acc = b[r];
        for (c, &pc) in pivots.iter().enumerate().skip(r + 1) {
            acc -= cols[pc][r] * sol[c];
        }
        sol[r] = acc / cols[pivots[r]][r];
    }
    let mut coefficients = vec![None; p];
    for (r, &pc) in pivots.iter().enumerate() {
        coefficients[pc] = Some(sol[r]);
    }
    let rss = b[rank..].iter().map(|v| v * v).sum();
    Some(LeastSquares { coefficients, rank, rss })
}
