// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

use prdp_core::bounds::prediction_interval;
use prdp_core::mechanisms::MechanismSpec;
use prdp_core::{EstimatorSpec, NoiseSpec, RngStream, TransformSpec};
use proptest::prelude::*;
use std::f64::consts::E;

fn coverage(m: &MechanismSpec, q: f64, p: f64, n: usize, seed: u64) -> f64 {
    let iv = prediction_interval(m, q, p).unwrap();
    let mut rng = RngStream::new(seed, 1);
    let hits = (0..n).filter(|_| iv.contains(m.privatize(q, &mut rng).unwrap())).count();
    hits as f64 / n as f64
}

// The last field marks estimators that are not monotone over the normal
// interval; their interval is the image's hull and may over-cover. The
// median-unbiased query is large enough that its zero clamp stays outside.
#[test]
fn empirical_coverage_matches_nominal() {
    let e = EstimatorSpec::MeanUnbiased;
    let cases = [
        (MechanismSpec::transformation(TransformSpec::log(1.0).unwrap(), 0.6, e).unwrap(), 1000.0, 100_000, false),
        (MechanismSpec::transformation(TransformSpec::kth_root(2, 0.0).unwrap(), 3.0, e).unwrap(), 20.0, 100_000, true),
        (MechanismSpec::transformation(TransformSpec::kth_root(3, 1.0).unwrap(), 0.5, EstimatorSpec::MedianUnbiased).unwrap(), 50.0, 100_000, false),
        (MechanismSpec::additive(NoiseSpec::gen_gaussian(2.0, 0.5).unwrap()), 10.0, 100_000, false),
        (MechanismSpec::additive(NoiseSpec::exp_polylog(1.0, E, 1.0, 2.0).unwrap()), 10.0, 20_000, false),
    ];
    for (i, (m, q, n, hull)) in cases.iter().enumerate() {
        for p in [0.5, 0.9, 0.95] {
            let got = coverage(m, *q, p, *n, i as u64);
            let tol = 3.0 * (p * (1.0 - p) / *n as f64).sqrt();
            assert!(got >= p - tol, "{} p {p}: {got}", m.name());
            if !hull {
                assert!(got <= p + tol, "{} p {p}: {got}", m.name());
            }
        }
    }
}

#[test]
fn log_interval_leans_right() {
    let m = MechanismSpec::transformation(TransformSpec::log(1.0).unwrap(), 0.5, EstimatorSpec::MeanUnbiased).unwrap();
    for q in [0.0, 1.0, 100.0, 1e6] {
        let iv = prediction_interval(&m, q, 0.95).unwrap();
        assert!(iv.hi - q > q - iv.lo, "q {q}: {iv:?}");
    }
}

#[test]
fn log_endpoints_scale_with_shifted_query() {
    let a = 2.0;
    let m = MechanismSpec::transformation(TransformSpec::log(a).unwrap(), 0.8, EstimatorSpec::MeanUnbiased).unwrap();
    let base = prediction_interval(&m, 0.0, 0.9).unwrap();
    for q in [1.0, 37.0, 5e3, 2e7] {
        let iv = prediction_interval(&m, q, 0.9).unwrap();
        let k = (q + a) / a;
        assert!(((iv.lo + a) / ((base.lo + a) * k) - 1.0).abs() < 1e-12, "q {q}");
        assert!(((iv.hi + a) / ((base.hi + a) * k) - 1.0).abs() < 1e-12, "q {q}");
    }
}

proptest! {
    #[test]
    fn width_shrinks_with_coverage(p in 0.01f64..0.98, dp in 0.001f64..0.01, q in 0.0f64..1e5, which in 0usize..5) {
        let e = EstimatorSpec::MeanUnbiased;
        let m = match which {
            0 => MechanismSpec::transformation(TransformSpec::log(1.0).unwrap(), 0.4, e).unwrap(),
            1 => MechanismSpec::transformation(TransformSpec::kth_root(4, 1.0).unwrap(), 0.2, e).unwrap(),
            2 => MechanismSpec::additive(NoiseSpec::gen_gaussian(91.0, 0.5).unwrap()),
            3 => MechanismSpec::additive(NoiseSpec::exp_polylog(1.0, E, 0.5, 2.0).unwrap()),
            _ => MechanismSpec::unit_split(10.0, 7.0).unwrap(),
        };
        let narrow = prediction_interval(&m, q, p).unwrap();
        let wide = prediction_interval(&m, q, p + dp).unwrap();
        prop_assert!(narrow.width() <= wide.width());
        prop_assert!(wide.lo <= narrow.lo && narrow.hi <= wide.hi);
    }
}
