//! Information content of a nearest-neighbour walk through the sample.
//!
//! The walk starts at a seeded random point and repeatedly moves to the
//! closest unvisited point. Each step yields a rate
//! `(y_{i+1} − y_i) / ‖x_{i+1} − x_i‖`; steps between duplicate points are
//! skipped. For a sensitivity `ε` a rate becomes the symbol `+1`, `−1` or
//! `0` (when `|r| ≤ ε`), and the symbol sequence is summarized by
//!
//! * `H(ε)`: entropy (base 6) of consecutive pairs of *different* symbols;
//! * `M(ε)`: number of sign changes of the zero-free symbol sequence,
//!   divided by the number of steps.

use alloc::vec::Vec;

use rand::Rng as _;

use crate::matrix::euclidean;
use crate::{rng, Matrix, MISSING};

/// Number of log-spaced sensitivities besides `ε = 0`.
pub const EPS_STEPS: usize = 1000;
pub const EPS_LOG10_MIN: f64 = -5.0;
pub const EPS_LOG10_MAX: f64 = 15.0;
/// `eps_s` is the first sensitivity with `H(ε)` below this value.
pub const SETTLING_THRESHOLD: f64 = 0.05;
/// `eps_ratio` is the first sensitivity with `M(ε) ≤ PIC_RATIO · M(0)`.
pub const PIC_RATIO: f64 = 0.5;

/// `{0} ∪ logspace(EPS_LOG10_MIN, EPS_LOG10_MAX, EPS_STEPS)`.
pub fn epsilon_grid() -> Vec<f64> {
    let mut eps = Vec::with_capacity(EPS_STEPS + 1);
    eps.push(0.0);
    let span = EPS_LOG10_MAX - EPS_LOG10_MIN;
    for k in 0..EPS_STEPS {
        let e = EPS_LOG10_MIN + span * k as f64 / (EPS_STEPS - 1) as f64;
        eps.push(libm::pow(10.0, e));
    }
    eps
}

/// Visiting order of the nearest-neighbour walk from `start`. Ties go to
/// the lowest index.
pub fn nearest_neighbour_tour(x: &Matrix, start: usize) -> Vec<usize> {
    let n = x.nrows();
    let mut visited = alloc::vec![false; n];
    let mut tour = Vec::with_capacity(n);
    let mut cur = start;
    visited[cur] = true;
    tour.push(cur);
    for _ in 1..n {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, &seen) in visited.iter().enumerate() {
            if seen {
                continue;
            }
            let d = euclidean(x.row(cur), x.row(j));
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        visited[best] = true;
        tour.push(best);
        cur = best;
    }
    tour
}

/// Rates of change along a tour, skipping zero-length steps.
pub fn tour_rates(x: &Matrix, y: &[f64], tour: &[usize]) -> Vec<f64> {
    tour.windows(2)
        .filter_map(|w| {
            let d = euclidean(x.row(w[0]), x.row(w[1]));
            (d > 0.0).then(|| (y[w[1]] - y[w[0]]) / d)
        })
        .collect()
}

#[inline]
fn symbol(r: f64, eps: f64) -> i8 {
    if r > eps {
        1
    } else if r < -eps {
        -1
    } else {
        0
    }
}

/// `(H(ε), M(ε))` for one sensitivity.
pub fn entropy_and_pic(rates: &[f64], eps: f64) -> (f64, f64) {
    let m = rates.len();
    if m == 0 {
        return (0.0, 0.0);
    }
    let symbols: Vec<i8> = rates.iter().map(|&r| symbol(r, eps)).collect();
    let mut counts = [[0usize; 3]; 3];
    for w in symbols.windows(2) {
        counts[(w[0] + 1) as usize][(w[1] + 1) as usize] += 1;
    }
    let pairs = m.saturating_sub(1);
    let mut h = 0.0;
    if pairs > 0 {
        let ln6 = libm::log(6.0);
        for (a, row) in counts.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                if a != b && c > 0 {
                    let p = c as f64 / pairs as f64;
                    h -= p * libm::log(p) / ln6;
                }
            }
        }
    }
    let mut changes = 0usize;
    let mut last = 0i8;
    for &s in symbols.iter().filter(|&&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    (h, changes as f64 / m as f64)
}

/// `H` and `M` over the whole sensitivity grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IcCurve {
    pub eps: Vec<f64>,
    pub h: Vec<f64>,
    pub m: Vec<f64>,
}

pub fn ic_curve(rates: &[f64]) -> IcCurve {
    let eps = epsilon_grid();
    let (h, m) = eps.iter().map(|&e| entropy_and_pic(rates, e)).unzip();
    IcCurve { eps, h, m }
}

fn log10_eps(eps: f64) -> f64 {
    // ε = 0 is reported at the bottom of the grid.
    if eps > 0.0 {
        libm::log10(eps)
    } else {
        EPS_LOG10_MIN
    }
}

impl IcCurve {
    /// `[h_max, eps_s, eps_max, eps_ratio, m0]`.
    pub fn features(&self) -> [f64; 5] {
        let mut arg_max = 0;
        for (k, &h) in self.h.iter().enumerate() {
            if h > self.h[arg_max] {
                arg_max = k;
            }
        }
        let eps_s = self.h.iter().position(|&h| h < SETTLING_THRESHOLD).map_or(MISSING, |k| log10_eps(self.eps[k]));
        let m0 = self.m[0];
        let eps_ratio = self.m.iter().position(|&m| m <= PIC_RATIO * m0).map_or(MISSING, |k| log10_eps(self.eps[k]));
        [self.h[arg_max], eps_s, log10_eps(self.eps[arg_max]), eps_ratio, m0]
    }
}

/// Five information content features: `h_max`, `eps_s`, `eps_max`,
/// `eps_ratio`, `m0`. All missing when every step has zero length.
pub fn information_content(x: &Matrix, y: &[f64], seed: u64) -> [f64; 5] {
    let n = x.nrows();
    if n < 3 {
        return [MISSING; 5];
    }
    let start = rng::rng(seed).gen_range(0..n);
    let tour = nearest_neighbour_tour(x, start);
    let rates = tour_rates(x, y, &tour);
    if rates.is_empty() {
        return [MISSING; 5];
    }
    ic_curve(&rates).features()
}
