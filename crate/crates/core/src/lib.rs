// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Per-record differential privacy for grouped sums.
//!
//! The crate provides
//!
//! * special functions used by the noise families ([`specfun`]),
//! * additive noise distributions with density, CDF, quantile, variance and
//!   seeded inverse-CDF sampling ([`distributions`]),
//! * the transformation mechanism and its estimators ([`transform`]),
//! * a uniform mechanism interface ([`mechanisms`]),
//! * per-record privacy loss policies and their composition ([`policy`]),
//! * prediction intervals for released values ([`bounds`]),
//! * an experiment harness that groups records, calibrates mechanisms,
//!   releases noisy sums and reports accuracy and privacy loss ([`harness`]).

pub mod bounds;
pub mod distributions;
pub mod error;
pub mod harness;
pub mod mechanisms;
pub mod policy;
pub mod specfun;
pub mod transform;

pub use bounds::PredictionInterval;
pub use distributions::{ExpPolylogNoise, GenGaussianNoise, GaussianNoise, Noise, NoiseSpec, RngStream};
pub use error::{Error, Result};
pub use harness::{Dataset, ExperimentConfig, ExperimentReport, MechanismTemplate};
pub use mechanisms::MechanismSpec;
pub use policy::{DifferingPair, LossFlavor, PolicyEval, PolicySource, PolicySpec};
pub use specfun::SeriesTolerance;
pub use transform::{EstimatorSpec, TransformKind, TransformSpec};
