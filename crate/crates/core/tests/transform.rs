// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

use prdp_core::mechanisms::MechanismSpec;
use prdp_core::specfun::{hermite_prob, std_normal_cdf};
use prdp_core::{EstimatorSpec, NoiseSpec, RngStream, TransformKind, TransformSpec};
use prdp_testkit::{gauss_hermite, hermite_explicit};
use proptest::prelude::*;

fn kinds() -> Vec<TransformKind> {
    let mut v = vec![TransformKind::Identity, TransformKind::Log];
    v.extend((1..=8).map(TransformKind::KthRoot));
    v
}

fn spec(kind: TransformKind, a: f64) -> TransformSpec {
    TransformSpec::new(kind, a).unwrap()
}

#[test]
fn hermite_matches_explicit_formula() {
    for k in 0..=12 {
        for i in -40..=40 {
            let x = f64::from(i) * 0.15;
            let got = hermite_prob(k, x).unwrap();
            let want = hermite_explicit(k, x);
            assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "k {k} x {x}: {got} vs {want}");
        }
    }
}

#[test]
fn mean_unbiased_by_quadrature() {
    let (nodes, weights) = gauss_hermite(100);
    for kind in kinds() {
        for (q, a, sigma) in [(0.0, 1.0, 0.2), (3.0, 0.5, 0.5), (250.0, 1.0, 0.4), (4e4, 2.0, 1.5)] {
            let t = spec(kind, a);
            let mu = t.apply(q).unwrap();
            let mean: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| w * t.estimate(EstimatorSpec::MeanUnbiased, sigma, mu + sigma * x))
                .sum();
            assert!((mean - q).abs() <= 1e-6 * q.max(1.0), "{kind:?} q {q} a {a} sigma {sigma}: {mean}");
        }
    }
}

#[test]
fn median_unbiased_has_half_mass_below_q() {
    // P[g(V) <= q] = P[V <= f(q + a)] = Φ(0) because g is nondecreasing and
    // g(f(q + a)) = q.
    for kind in kinds() {
        for (q, a, sigma) in [(1.0, 0.5, 0.3), (80.0, 1.0, 1.0)] {
            let t = spec(kind, a);
            let mu = t.apply(q).unwrap();
            let back = t.estimate(EstimatorSpec::MedianUnbiased, sigma, mu);
            assert!((back - q).abs() <= 1e-9 * q.max(1.0), "{kind:?}: {back}");
            assert_eq!(std_normal_cdf((mu - mu) / sigma), 0.5);
        }
    }
}

#[test]
fn median_of_runs_is_q() {
    for (i, kind) in kinds().into_iter().enumerate() {
        let q = 40.0;
        let m = MechanismSpec::transformation(spec(kind, 1.0), 0.8, EstimatorSpec::MedianUnbiased).unwrap();
        let mut rng = RngStream::new(12, i as u64);
        let mut xs: Vec<f64> = (0..100_000).map(|_| m.privatize(q, &mut rng).unwrap()).collect();
        xs.sort_by(f64::total_cmp);
        let (lo, hi) = prdp_testkit::median_ci(&xs, 2.5758);
        assert!(lo <= q && q <= hi, "{kind:?}: [{lo}, {hi}]");
    }
}

#[test]
fn variance_grows_with_q() {
    for kind in kinds() {
        let t = spec(kind, 1.0);
        let mut prev = t.mechanism_variance(0.7, 0.0);
        for i in 1..=300 {
            let q = 1.05f64.powi(i) - 1.0;
            let v = t.mechanism_variance(0.7, q);
            match kind {
                TransformKind::Identity | TransformKind::KthRoot(1) => assert_eq!(v, prev),
                _ => assert!(v >= prev, "{kind:?} at {q}"),
            }
            prev = v;
        }
    }
}

#[test]
fn identity_matches_additive_gaussian() {
    let t = MechanismSpec::transformation(spec(TransformKind::Identity, 0.0), 2.5, EstimatorSpec::MeanUnbiased).unwrap();
    let g = MechanismSpec::additive(NoiseSpec::gaussian(2.5).unwrap());
    let (mut r1, mut r2) = (RngStream::new(4, 4), RngStream::new(4, 4));
    for _ in 0..1000 {
        let (x, y) = (t.privatize(17.0, &mut r1).unwrap(), g.privatize(17.0, &mut r2).unwrap());
        assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{x} vs {y}");
    }
}

#[test]
fn same_stream_same_output() {
    let mechanisms = [
        MechanismSpec::transformation(spec(TransformKind::Log, 1.0), 0.3, EstimatorSpec::MeanUnbiased).unwrap(),
        MechanismSpec::additive(NoiseSpec::exp_polylog(1.0, std::f64::consts::E, 1.0, 2.0).unwrap()),
        MechanismSpec::unit_split(10.0, 3.0).unwrap(),
    ];
    for m in mechanisms {
        let a: Vec<f64> = {
            let mut r = RngStream::new(99, 5);
            (0..50).map(|_| m.privatize(12.0, &mut r).unwrap()).collect()
        };
        let b: Vec<f64> = {
            let mut r = RngStream::new(99, 5);
            (0..50).map(|_| m.privatize(12.0, &mut r).unwrap()).collect()
        };
        assert_eq!(a, b);
    }
}

proptest! {
    #[test]
    fn median_estimator_is_monotone(k in 1u32..=8, a in 0.0f64..5.0, s in 0.05f64..3.0, v in -20.0f64..20.0, dv in 0.0f64..2.0) {
        for kind in [TransformKind::KthRoot(k), TransformKind::Log, TransformKind::Identity] {
            let a = if kind == TransformKind::Log { a + 0.1 } else { a };
            let t = spec(kind, a);
            let e = EstimatorSpec::MedianUnbiased;
            prop_assert!(t.estimate(e, s, v) <= t.estimate(e, s, v + dv));
        }
    }

    #[test]
    fn zero_noise_inverts(k in 1u32..=8, a in 0.0f64..5.0, q in 0.0f64..1e5) {
        for kind in [TransformKind::KthRoot(k), TransformKind::Log, TransformKind::Identity] {
            let a = if kind == TransformKind::Log { a + 0.1 } else { a };
            for e in [EstimatorSpec::MedianUnbiased, EstimatorSpec::NaiveInverse] {
                let m = MechanismSpec::transformation(spec(kind, a), 1.0, e).unwrap();
                let got = m.privatize_with(q, 0.0).unwrap();
                prop_assert!((got - q).abs() <= 1e-9 * (q + a).max(1.0), "{:?} {:?}: {} vs {}", kind, e, got, q);
            }
        }
    }
}
