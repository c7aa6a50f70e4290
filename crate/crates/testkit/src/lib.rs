// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Reference oracles for the prdp test suites.
//!
//! Nothing in here is used by the library itself. Every routine is written
//! from first principles (adaptive Gauss-Kronrod, Golub-Welsch-free
//! Gauss-Hermite via Newton, brute-force counting) so that tests built on it
//! stay independent of the code paths they check.

pub mod quad;

pub use quad::{gauss_hermite, integrate, integrate_to_infinity, log_integrate};

/// One-sample Kolmogorov-Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("NaN sample"));
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Fraction of `values` that are `<= t`, by direct counting.
pub fn count_le(values: &[f64], t: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().filter(|&&v| v <= t).count() as f64 / values.len() as f64
}

/// Sample mean and unbiased sample variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Distribution-free confidence interval for the median of `samples`.
///
/// Returns the pair of order statistics whose ranks sit `z` binomial
/// standard deviations either side of `n/2`.
pub fn median_ci(samples: &[f64], z: f64) -> (f64, f64) {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("NaN sample"));
    let n = xs.len() as f64;
    let half = z * n.sqrt() / 2.0;
    let lo = ((n / 2.0 - half).floor().max(0.0)) as usize;
    let hi = ((n / 2.0 + half).ceil() as usize).min(xs.len() - 1);
    (xs[lo], xs[hi])
}

/// Sample median (average of the middle pair for even lengths).
pub fn median(samples: &[f64]) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("NaN sample"));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Probabilists' Hermite polynomial from its explicit coefficient formula
/// `He_k(x) = k! * sum_m (-1)^m x^(k-2m) / (m! (k-2m)! 2^m)`.
pub fn hermite_explicit(k: u32, x: f64) -> f64 {
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    (0..=k / 2)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * fact(k) * x.powi((k - 2 * m) as i32)
                / (fact(m) * fact(k - 2 * m) * 2f64.powi(m as i32))
        })
        .sum()
}
