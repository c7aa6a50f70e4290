// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the criterion benches.

use prdp_core::harness::{Dataset, ExperimentConfig};
use prdp_core::mechanisms::MechanismSpec;
use prdp_core::{EstimatorSpec, NoiseSpec, TransformSpec};

/// Noise families at the parameters used for the county-level tables.
pub fn noises() -> Vec<(&'static str, NoiseSpec)> {
    vec![
        ("gaussian", NoiseSpec::gaussian(7212.0).unwrap()),
        ("gen_gaussian_p0.5", NoiseSpec::gen_gaussian(91.0, 0.5).unwrap()),
        ("exp_polylog_p1", NoiseSpec::exp_polylog(1.0, 3.0, 4.0, 1.0).unwrap()),
        ("exp_polylog_p2", NoiseSpec::exp_polylog(1.0, std::f64::consts::E, 0.145, 2.0).unwrap()),
    ]
}

pub fn mechanisms() -> Vec<(&'static str, MechanismSpec)> {
    let e = EstimatorSpec::MeanUnbiased;
    let mut v = vec![
        ("sqrt", MechanismSpec::transformation(TransformSpec::kth_root(2, 0.0).unwrap(), 5.0, e).unwrap()),
        ("fourth_root", MechanismSpec::transformation(TransformSpec::kth_root(4, 0.0).unwrap(), 0.2, e).unwrap()),
        ("log", MechanismSpec::transformation(TransformSpec::log(1.0).unwrap(), 0.1, e).unwrap()),
        ("unit_split", MechanismSpec::unit_split(10.0, 50f64.sqrt()).unwrap()),
    ];
    v.extend(noises().into_iter().map(|(name, n)| (name, MechanismSpec::additive(n))));
    v
}

/// A synthetic grouped dataset with `groups` groups of `per_group` records
/// and skewed values.
pub fn dataset(groups: usize, per_group: usize) -> Dataset {
    let mut ds = Dataset::new(vec!["G".into()], "V".into());
    for g in 0..groups {
        for r in 0..per_group {
            let v = ((g * 31 + r * 17) % 1000) as f64;
            ds.push(vec![format!("{g:05}")], v * v / 10.0).unwrap();
        }
    }
    ds
}

pub fn config(mechanism: MechanismSpec) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(mechanism, vec!["G".into()], "V".into());
    cfg.sd_grid = Some(vec![0.0, 1e3, 1e6]);
    cfg
}
