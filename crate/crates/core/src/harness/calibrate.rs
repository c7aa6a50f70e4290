// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Calibration of a mechanism's free parameter to a target standard deviation.

use crate::distributions::{Noise, NoiseSpec};
use crate::error::{Error, Result};
use crate::mechanisms::MechanismSpec;
use crate::transform::{EstimatorSpec, TransformSpec};
use serde::{Deserialize, Serialize};

fn mean_unbiased() -> EstimatorSpec {
    EstimatorSpec::MeanUnbiased
}

/// A mechanism with every parameter fixed except the one calibration solves
/// for: `d` for exp-polylog noise, `σ` for everything else.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mechanism", rename_all = "snake_case")]
pub enum MechanismTemplate {
    Gaussian,
    GenGaussian {
        p: f64,
    },
    ExpPolylog {
        sigma: f64,
        p: f64,
        a: f64,
    },
    Identity {
        #[serde(default)]
        a: f64,
        #[serde(default = "mean_unbiased", with = "estimator_name")]
        estimator: EstimatorSpec,
    },
    KthRoot {
        k: u32,
        #[serde(default)]
        a: f64,
        #[serde(default = "mean_unbiased", with = "estimator_name")]
        estimator: EstimatorSpec,
    },
    Log {
        a: f64,
        #[serde(default = "mean_unbiased", with = "estimator_name")]
        estimator: EstimatorSpec,
    },
    UnitSplit {
        threshold: f64,
    },
}

mod estimator_name {
    use crate::transform::EstimatorSpec;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(e: &EstimatorSpec, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match e {
            EstimatorSpec::MeanUnbiased => "mean_unbiased",
            EstimatorSpec::MedianUnbiased => "median_unbiased",
            EstimatorSpec::NaiveInverse => "naive",
        })
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<EstimatorSpec, D::Error> {
        match String::deserialize(d)?.as_str() {
            "mean_unbiased" => Ok(EstimatorSpec::MeanUnbiased),
            "median_unbiased" => Ok(EstimatorSpec::MedianUnbiased),
            "naive" => Ok(EstimatorSpec::NaiveInverse),
            other => Err(serde::de::Error::custom(format!("unknown estimator {other:?}"))),
        }
    }
}

impl MechanismTemplate {
    /// The mechanism with free parameter `x`.
    pub fn instantiate(&self, x: f64) -> Result<MechanismSpec> {
        Ok(match *self {
            Self::Gaussian => MechanismSpec::additive(NoiseSpec::gaussian(x)?),
            Self::GenGaussian { p } => MechanismSpec::additive(NoiseSpec::gen_gaussian(x, p)?),
            Self::ExpPolylog { sigma, p, a } => MechanismSpec::additive(NoiseSpec::exp_polylog(sigma, a, x, p)?),
            Self::Identity { a, estimator } => MechanismSpec::transformation(TransformSpec::identity(a)?, x, estimator)?,
            Self::KthRoot { k, a, estimator } => {
                MechanismSpec::transformation(TransformSpec::kth_root(k, a)?, x, estimator)?
            }
            Self::Log { a, estimator } => MechanismSpec::transformation(TransformSpec::log(a)?, x, estimator)?,
            Self::UnitSplit { threshold } => MechanismSpec::unit_split(threshold, x)?,
        })
    }

    // Lower end of the free parameter's domain, and whether the standard
    // deviation increases with it.
    fn domain(&self) -> (f64, bool) {
        match *self {
            Self::ExpPolylog { p, .. } if p == 1.0 => (3.0, false),
            Self::ExpPolylog { .. } => (0.0, false),
            _ => (0.0, true),
        }
    }
}

/// Standard deviation used for calibration: the mean-unbiased variance at
/// `reference_q` for transformation mechanisms, the noise variance otherwise.
pub fn calibration_sd(m: &MechanismSpec, reference_q: f64) -> Result<f64> {
    match m {
        MechanismSpec::Transformation { transform, sigma, .. } => {
            Ok(transform.mechanism_variance(*sigma, reference_q).sqrt())
        }
        MechanismSpec::Additive(noise) => Ok(noise.variance()?.sqrt()),
        MechanismSpec::UnitSplitGaussian { sigma, .. } => Ok(*sigma),
    }
}

/// Solve for the free parameter so that the mechanism's standard deviation at
/// `reference_q` equals `target_sd` to 1e-9 relative.
///
/// Bisection runs on `ln(x - x_min)`, with the bracket grown geometrically
/// from 1 until it straddles the target.
pub fn calibrate(template: &MechanismTemplate, target_sd: f64, reference_q: f64) -> Result<MechanismSpec> {
    if !(target_sd > 0.0) || !target_sd.is_finite() {
        return Err(Error::InvalidParameter(format!("target sd must be positive, got {target_sd}")));
    }
    if !(reference_q >= 0.0) {
        return Err(Error::InvalidParameter(format!("reference q must be >= 0, got {reference_q}")));
    }
    let (x_min, increasing) = template.domain();
    // Signed gap in log space; positive when sd is above target.
    let gap = |y: f64| -> Result<f64> {
        let m = template.instantiate(x_min + y.exp())?;
        let sd = match calibration_sd(&m, reference_q) {
            Err(Error::NonexistentMoment(_)) => f64::INFINITY,
            other => other?,
        };
        Ok(sd.ln() - target_sd.ln())
    };
    // Orient so that g is increasing in y.
    let g = |y: f64| -> Result<f64> {
        let v = gap(y)?;
        Ok(if increasing { v } else { -v })
    };

    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let mut steps = 0;
    while g(lo)? > 0.0 {
        lo -= 1.0;
        steps += 1;
        if steps > 2000 {
            return Err(Error::Bracketing(format!("no lower bracket for target sd {target_sd}")));
        }
    }
    steps = 0;
    while g(hi)? < 0.0 {
        hi += 1.0;
        steps += 1;
        if steps > 2000 {
            return Err(Error::Bracketing(format!("no upper bracket for target sd {target_sd}")));
        }
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let v = g(mid)?;
        if v.abs() <= 1e-13 {
            lo = mid;
            hi = mid;
            break;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y = 0.5 * (lo + hi);
    let residual = gap(y)?;
    if !(residual.abs() <= 1e-9) {
        return Err(Error::Bracketing(format!(
            "bisection stalled with relative residual {residual:e}"
        )));
    }
    template.instantiate(x_min + y.exp())
}

/// The free parameter's value in a calibrated mechanism.
pub fn free_parameter(m: &MechanismSpec) -> f64 {
    match m {
        MechanismSpec::Additive(NoiseSpec::ExpPolylog(e)) => e.d(),
        MechanismSpec::Additive(n) => n.sigma(),
        MechanismSpec::Transformation { sigma, .. } | MechanismSpec::UnitSplitGaussian { sigma, .. } => *sigma,
    }
}
