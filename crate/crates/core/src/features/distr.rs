//! `ela_distr`: shape of the objective value distribution.

use alloc::format;

use crate::{stats, Error, Result, MISSING};

/// Points of the density grid used for peak detection.
pub const KDE_GRID: usize = 512;
/// A local maximum counts as a peak when its density exceeds this fraction
/// of the global maximum density.
pub const PEAK_THRESHOLD: f64 = 0.1;

/// Returns `[skewness, kurtosis, number_of_peaks]`.
pub fn ela_distr(y: &[f64]) -> Result<[f64; 3]> {
    if y.len() < 4 {
        return Err(Error::InvalidArgument(format!("ela_distr needs n >= 4, got {}", y.len())));
    }
    let skew = stats::skewness(y).unwrap_or(MISSING);
    let kurt = stats::kurtosis(y).unwrap_or(MISSING);
    Ok([skew, kurt, number_of_peaks(y) as f64])
}

/// Silverman's rule of thumb, `0.9 · min(sd, IQR / 1.34) · n^{-1/5}`.
pub fn silverman_bandwidth(y: &[f64]) -> f64 {
    let sd = stats::sd(y);
    let sorted = stats::sorted(y);
    let iqr = stats::quantile_sorted(&sorted, 0.75) - stats::quantile_sorted(&sorted, 0.25);
    let mut lo = sd.min(iqr / 1.34);
    if lo.is_nan() || lo <= 0.0 {
        lo = if sd > 0.0 {
            sd
        } else if y[0] != 0.0 {
            y[0].abs()
        } else {
            1.0
        };
    }
    0.9 * lo * libm::pow(y.len() as f64, -0.2)
}

/// Number of modes of a Gaussian kernel density estimate of `y`, evaluated
/// on a uniform grid over `[min y, max y]`. Grid endpoints count as peaks
/// when they exceed their single neighbour.
pub fn number_of_peaks(y: &[f64]) -> usize {
    let (lo, hi) = stats::min_max(y);
    if hi == lo {
        return 1;
    }
    let h = silverman_bandwidth(y);
    let step = (hi - lo) / (KDE_GRID - 1) as f64;
    let density: alloc::vec::Vec<f64> = (0..KDE_GRID)
        .map(|g| {
            let at = lo + g as f64 * step;
            y.iter()
                .map(|v| {
                    let z = (at - v) / h;
                    libm::exp(-0.5 * z * z)
                })
                .sum::<f64>()
        })
        .collect();
    let max = density.iter().copied().fold(0.0, f64::max);
    let last = KDE_GRID - 1;
    (0..KDE_GRID)
        .filter(|&g| {
            let left = g == 0 || density[g] > density[g - 1];
            let right = g == last || density[g] >= density[g + 1];
            left && right && density[g] > PEAK_THRESHOLD * max
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::is_missing;
    use alloc::vec::Vec;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Normal};

    fn normal_draws(n: usize, mean: f64, sd: f64, seed: u64) -> Vec<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = Normal::new(mean, sd).unwrap();
        (0..n).map(|_| d.sample(&mut rng)).collect()
    }

    #[test]
    fn standard_normal() {
        let y = normal_draws(10_000, 0.0, 1.0, 1);
        let [s, k, p] = ela_distr(&y).unwrap();
        assert!(s.abs() < 0.1, "skewness {s}");
        assert!(k.abs() < 0.2, "kurtosis {k}");
        assert_eq!(p, 1.0);
    }

    #[test]
    fn separated_mixture_has_two_peaks() {
        let mut y = normal_draws(500, 0.0, 0.1, 2);
        y.extend(normal_draws(500, 1.0, 0.1, 3));
        assert_eq!(number_of_peaks(&y), 2);
    }

    #[test]
    fn skewed_sample_peaks_at_the_edge() {
        // Exponential-like values pile up at the minimum.
        let y: Vec<f64> = (0..400).map(|i| libm::pow(i as f64 / 400.0, 4.0)).collect();
        assert_eq!(number_of_peaks(&y), 1);
    }

    #[test]
    fn constant_is_degenerate() {
        let [s, k, p] = ela_distr(&[0.7; 30]).unwrap();
        assert!(is_missing(s) && is_missing(k));
        assert_eq!(p, 1.0);
    }

    #[test]
    fn too_few_points() {
        assert!(ela_distr(&[1.0, 2.0, 3.0]).is_err());
    }
}
