// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Prediction intervals for released values.
//!
//! A transformation-mechanism interval maps the central normal interval of
//! the noisy transformed value through the estimator `g`, taking the extrema
//! of `g` over it. An additive-mechanism interval is the central interval of
//! the noise shifted by the true answer.

use crate::distributions::{Noise, NoiseSpec};
use crate::error::{domain, Result};
use crate::mechanisms::MechanismSpec;
use crate::specfun::std_normal_quantile;
use crate::transform::{EstimatorSpec, TransformKind, TransformSpec};
use serde::{Deserialize, Serialize};

/// An interval containing the release with probability `coverage`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictionInterval {
    pub lo: f64,
    pub hi: f64,
    pub coverage: f64,
}

impl PredictionInterval {
    pub fn new(lo: f64, hi: f64, coverage: f64) -> Result<Self> {
        check_coverage(coverage)?;
        if !(lo <= hi) {
            return Err(domain(format!("interval needs lo <= hi, got [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi, coverage })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn check_coverage(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("coverage must lie in (0, 1), got {p}")))
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

// Golden-section search for an extremum of `g` on [lo, hi]; `sign` = 1 finds
// a minimum, -1 a maximum.
fn golden(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, sign: f64) -> f64 {
    let h = |x: f64| sign * g(x);
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let (mut f1, mut f2) = (h(x1), h(x2));
    for _ in 0..200 {
        if (hi - lo).abs() <= 1e-10 * lo.abs().max(hi.abs()).max(1e-300) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = h(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = h(x2);
        }
    }
    0.5 * (lo + hi)
}

// Interior stationary points of g inside (lo, hi).
fn stationary_points(t: &TransformSpec, e: EstimatorSpec, sigma: f64, lo: f64, hi: f64) -> Vec<f64> {
    let k = match t.kind() {
        TransformKind::KthRoot(k) => k,
        _ => return Vec::new(),
    };
    let mut pts = match (e, k) {
        (EstimatorSpec::NaiveInverse, k) if k % 2 == 0 => vec![0.0],
        // g'(v) = k σ^{k-1} He_{k-1}(v/σ); roots of He_1..He_3 in closed form.
        (EstimatorSpec::MeanUnbiased, 1) => vec![],
        (EstimatorSpec::MeanUnbiased, 2) => vec![0.0],
        (EstimatorSpec::MeanUnbiased, 3) => vec![-sigma, sigma],
        (EstimatorSpec::MeanUnbiased, 4) => {
            let r = 3f64.sqrt() * sigma;
            vec![-r, 0.0, r]
        }
        (EstimatorSpec::MeanUnbiased, _) => {
            let g = |v: f64| t.estimate(e, sigma, v);
            let n = 4096;
            let step = (hi - lo) / n as f64;
            let vals: Vec<f64> = (0..=n).map(|i| g(lo + step * i as f64)).collect();
            let mut found = Vec::new();
            for i in 1..n {
                let (a, b, c) = (vals[i - 1], vals[i], vals[i + 1]);
                let (l, r) = (lo + step * (i - 1) as f64, lo + step * (i + 1) as f64);
                if b <= a && b <= c {
                    found.push(golden(&g, l, r, 1.0));
                } else if b >= a && b >= c {
                    found.push(golden(&g, l, r, -1.0));
                }
            }
            found
        }
        _ => vec![],
    };
    pts.retain(|&v| v > lo && v < hi);
    pts
}

/// Interval `[min g, max g]` over the central `p`-probability interval of
/// the noisy transformed value `f(q + a) + σξ`.
pub fn transform_prediction_interval(
    t: &TransformSpec,
    sigma: f64,
    e: EstimatorSpec,
    q: f64,
    p: f64,
) -> Result<PredictionInterval> {
    check_coverage(p)?;
    let mu = t.apply(q)?;
    let z = std_normal_quantile(0.5 * (1.0 + p))?;
    let (lo, hi) = (mu - z * sigma, mu + z * sigma);
    let mut values = vec![t.estimate(e, sigma, lo), t.estimate(e, sigma, hi)];
    for v in stationary_points(t, e, sigma, lo, hi) {
        values.push(t.estimate(e, sigma, v));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    PredictionInterval::new(min, max, p)
}

/// Interval `q ± F⁻¹((1 + p) / 2)` for an additive mechanism.
pub fn additive_prediction_interval(noise: &NoiseSpec, q: f64, p: f64) -> Result<PredictionInterval> {
    check_coverage(p)?;
    let half = noise.tail_quantile(1.0 - p)?;
    PredictionInterval::new(q - half, q + half, p)
}

/// Prediction interval for any mechanism at true query `q`.
pub fn prediction_interval(m: &MechanismSpec, q: f64, p: f64) -> Result<PredictionInterval> {
    match *m {
        MechanismSpec::Transformation {
            transform,
            sigma,
            estimator,
        } => transform_prediction_interval(&transform, sigma, estimator, q, p),
        MechanismSpec::Additive(noise) => additive_prediction_interval(&noise, q, p),
        MechanismSpec::UnitSplitGaussian { sigma, .. } => {
            additive_prediction_interval(&NoiseSpec::gaussian(sigma)?, q, p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn log_interval() {
        let t = TransformSpec::log(1.0).unwrap();
        let iv = transform_prediction_interval(&t, 1.0, EstimatorSpec::MeanUnbiased, 1000.0, 0.95).unwrap();
        assert!((iv.lo - 85.0).abs() < 1.0, "{iv:?}");
        assert!((iv.hi - 4309.0).abs() < 1.0, "{iv:?}");
        assert!(iv.hi - 1000.0 > 1000.0 - iv.lo);
    }

    #[test]
    fn sqrt_interval() {
        let t = TransformSpec::kth_root(2, 1.0).unwrap();
        let iv = transform_prediction_interval(&t, 1.0, EstimatorSpec::MeanUnbiased, 1000.0, 0.95).unwrap();
        assert!((iv.lo - 879.0).abs() < 1.0, "{iv:?}");
        assert!((iv.hi - 1127.0).abs() < 1.0, "{iv:?}");
    }

    #[test]
    fn sqrt_interval_interior_minimum() {
        // With q small the normal interval straddles 0 and g(0) = -σ² - a.
        let t = TransformSpec::kth_root(2, 0.5).unwrap();
        let iv = transform_prediction_interval(&t, 1.0, EstimatorSpec::MeanUnbiased, 0.0, 0.95).unwrap();
        assert!((iv.lo - (-1.0 - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn higher_order_extrema_by_search() {
        // k = 6: compare the search against a dense scan.
        let t = TransformSpec::kth_root(6, 0.0).unwrap();
        let sigma = 1.0;
        let iv = transform_prediction_interval(&t, sigma, EstimatorSpec::MeanUnbiased, 0.5, 0.9).unwrap();
        let mu = t.apply(0.5).unwrap();
        let z = std_normal_quantile(0.95).unwrap();
        let n = 200_000;
        let (lo, hi) = (mu - z * sigma, mu + z * sigma);
        let mut mn = f64::INFINITY;
        let mut mx = f64::NEG_INFINITY;
        for i in 0..=n {
            let v = lo + (hi - lo) * f64::from(i) / f64::from(n);
            let g = t.estimate(EstimatorSpec::MeanUnbiased, sigma, v);
            mn = mn.min(g);
            mx = mx.max(g);
        }
        assert!(iv.lo <= mn + 1e-9 && iv.lo > mn - 1e-6);
        assert!(iv.hi >= mx - 1e-9 && iv.hi < mx + 1e-6);
    }

    #[test]
    fn collapsed_interval() {
        let t = TransformSpec::log(1.0).unwrap();
        let iv = transform_prediction_interval(&t, 0.5, EstimatorSpec::MeanUnbiased, 40.0, 1e-12).unwrap();
        let centre = t.estimate(EstimatorSpec::MeanUnbiased, 0.5, t.apply(40.0).unwrap());
        assert!((iv.lo - centre).abs() < 1e-9 && (iv.hi - centre).abs() < 1e-9);
    }

    #[test]
    fn exp_polylog_half_width() {
        let n = NoiseSpec::exp_polylog(1.0, E, 1.0, 2.0).unwrap();
        let iv = additive_prediction_interval(&n, 3.0, 0.95).unwrap();
        assert!((iv.hi - 3.0 - 5.418).abs() < 0.01);
        assert!(((iv.lo + iv.hi) / 2.0 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_coverage() {
        let n = NoiseSpec::gaussian(1.0).unwrap();
        assert!(additive_prediction_interval(&n, 0.0, 1.0).is_err());
        assert!(additive_prediction_interval(&n, 0.0, 0.0).is_err());
    }
}
