// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! The transformation mechanism, the additive mechanism and the
//! unit-splitting Gaussian baseline.
//!
//! Outputs are never clamped or rounded; negative releases are returned as-is.

use crate::distributions::{GaussianNoise, Noise, NoiseSpec, RngStream};
use crate::error::{domain, invalid, Error, Result};
use crate::transform::{EstimatorSpec, TransformKind, TransformSpec};
use serde::{Deserialize, Serialize};

/// A fully parameterised privatization mechanism.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MechanismJson", into = "MechanismJson")]
pub enum MechanismSpec {
    Transformation {
        transform: TransformSpec,
        sigma: f64,
        estimator: EstimatorSpec,
    },
    Additive(NoiseSpec),
    UnitSplitGaussian {
        threshold: f64,
        sigma: f64,
    },
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

impl MechanismSpec {
    pub fn transformation(transform: TransformSpec, sigma: f64, estimator: EstimatorSpec) -> Result<Self> {
        check_positive("sigma", sigma)?;
        Ok(Self::Transformation {
            transform,
            sigma,
            estimator,
        })
    }

    pub fn additive(noise: NoiseSpec) -> Self {
        Self::Additive(noise)
    }

    pub fn unit_split(threshold: f64, sigma: f64) -> Result<Self> {
        check_positive("threshold", threshold)?;
        check_positive("sigma", sigma)?;
        Ok(Self::UnitSplitGaussian { threshold, sigma })
    }

    /// Short name matching the JSON `"mechanism"` tag.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Transformation { transform, .. } => match transform.kind() {
                TransformKind::Identity => "identity",
                TransformKind::KthRoot(_) => "kth_root",
                TransformKind::Log => "log",
            },
            Self::Additive(n) => n.family(),
            Self::UnitSplitGaussian { .. } => "unit_split",
        }
    }

    /// Release a noisy answer to a query with true value `q`.
    pub fn privatize(&self, q: f64, rng: &mut RngStream) -> Result<f64> {
        match *self {
            Self::Transformation {
                transform,
                sigma,
                estimator,
            } => transformation_privatize(q, &transform, sigma, estimator, rng),
            Self::Additive(noise) => additive_privatize(q, &noise, rng),
            Self::UnitSplitGaussian { threshold, sigma } => unit_split_privatize(q, threshold, sigma, rng),
        }
    }

    /// The deterministic skeleton of [`privatize`](Self::privatize) with the
    /// random draw supplied by the caller: a standard normal `ξ` for the
    /// transformation mechanism, the raw noise value otherwise.
    pub fn privatize_with(&self, q: f64, draw: f64) -> Result<f64> {
        match *self {
            Self::Transformation {
                transform,
                sigma,
                estimator,
            } => transformation_privatize_with(q, &transform, sigma, estimator, draw),
            Self::Additive(_) => Ok(additive_privatize_with(q, draw)),
            Self::UnitSplitGaussian { .. } => {
                if !(q >= 0.0) {
                    return Err(domain(format!("query must be >= 0, got {q}")));
                }
                Ok(q + draw)
            }
        }
    }
}

/// Transformation mechanism with an injected standard normal draw `xi`.
pub fn transformation_privatize_with(
    q: f64,
    t: &TransformSpec,
    sigma: f64,
    e: EstimatorSpec,
    xi: f64,
) -> Result<f64> {
    check_positive("sigma", sigma)?;
    let v = t.apply(q)? + sigma * xi;
    Ok(t.estimate(e, sigma, v))
}

/// Transformation mechanism: `g(f(q + a) + σξ)` with `ξ ~ N(0, 1)`.
pub fn transformation_privatize(
    q: f64,
    t: &TransformSpec,
    sigma: f64,
    e: EstimatorSpec,
    rng: &mut RngStream,
) -> Result<f64> {
    transformation_privatize_with(q, t, sigma, e, rng.std_normal())
}

/// Additive mechanism with an injected noise value.
pub fn additive_privatize_with(q: f64, draw: f64) -> f64 {
    q + draw
}

/// Additive mechanism: `q + Z` with `Z` drawn from `noise`.
pub fn additive_privatize(q: f64, noise: &NoiseSpec, rng: &mut RngStream) -> Result<f64> {
    Ok(q + noise.sample(rng)?)
}

/// Number of rows a record of size `value` is split into: `⌈value / threshold⌉`,
/// with a zero-valued record kept as one row.
pub fn unit_split_count(value: f64, threshold: f64) -> Result<u64> {
    check_positive("threshold", threshold)?;
    if !(value >= 0.0) || !value.is_finite() {
        return Err(domain(format!("value must be finite and >= 0, got {value}")));
    }
    if value == 0.0 {
        return Ok(1);
    }
    let n = (value / threshold).ceil();
    if n > u64::MAX as f64 {
        return Err(Error::Domain(format!("split count overflows for value {value}")));
    }
    Ok(n as u64)
}

/// Gaussian mechanism on the split data. Splitting does not change a sum,
/// so the release is `q + N(0, σ²)`; the split only affects the policy.
pub fn unit_split_privatize(q: f64, threshold: f64, sigma: f64, rng: &mut RngStream) -> Result<f64> {
    check_positive("threshold", threshold)?;
    if !(q >= 0.0) {
        return Err(domain(format!("query must be >= 0, got {q}")));
    }
    Ok(q + GaussianNoise::new(sigma)?.sample(rng)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MechanismJson {
    mechanism: String,
    sigma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    estimator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    threshold: Option<f64>,
}

fn parse_estimator(s: Option<&str>) -> Result<EstimatorSpec> {
    match s.unwrap_or("mean_unbiased") {
        "mean_unbiased" => Ok(EstimatorSpec::MeanUnbiased),
        "median_unbiased" => Ok(EstimatorSpec::MedianUnbiased),
        "naive" => Ok(EstimatorSpec::NaiveInverse),
        other => Err(invalid(format!("unknown estimator {other:?}"))),
    }
}

fn estimator_name(e: EstimatorSpec) -> &'static str {
    match e {
        EstimatorSpec::MeanUnbiased => "mean_unbiased",
        EstimatorSpec::MedianUnbiased => "median_unbiased",
        EstimatorSpec::NaiveInverse => "naive",
    }
}

impl TryFrom<MechanismJson> for MechanismSpec {
    type Error = Error;

    fn try_from(j: MechanismJson) -> Result<Self> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| invalid(format!("mechanism {} requires field {name}", j.mechanism)))
        };
        let estimator = parse_estimator(j.estimator.as_deref())?;
        let a = j.a.unwrap_or(0.0);
        match j.mechanism.as_str() {
            "gaussian" => Ok(Self::Additive(NoiseSpec::gaussian(j.sigma)?)),
            "gen_gaussian" => Ok(Self::Additive(NoiseSpec::gen_gaussian(j.sigma, need(j.p, "p")?)?)),
            "exp_polylog" => Ok(Self::Additive(NoiseSpec::exp_polylog(
                j.sigma,
                need(j.a, "a")?,
                need(j.d, "d")?,
                need(j.p, "p")?,
            )?)),
            "identity" => Self::transformation(TransformSpec::identity(a)?, j.sigma, estimator),
            "kth_root" => {
                let k = j.k.ok_or_else(|| invalid("mechanism kth_root requires field k"))?;
                Self::transformation(TransformSpec::kth_root(k, a)?, j.sigma, estimator)
            }
            "log" => Self::transformation(TransformSpec::log(need(j.a, "a")?)?, j.sigma, estimator),
            "unit_split" => Self::unit_split(need(j.threshold, "threshold")?, j.sigma),
            other => Err(invalid(format!("unknown mechanism {other:?}"))),
        }
    }
}

impl From<MechanismSpec> for MechanismJson {
    fn from(m: MechanismSpec) -> Self {
        let mut j = Self {
            mechanism: m.name().to_string(),
            sigma: 0.0,
            p: None,
            a: None,
            d: None,
            k: None,
            estimator: None,
            threshold: None,
        };
        match m {
            MechanismSpec::Transformation {
                transform,
                sigma,
                estimator,
            } => {
                j.sigma = sigma;
                j.a = Some(transform.a());
                if let TransformKind::KthRoot(k) = transform.kind() {
                    j.k = Some(k);
                }
                j.estimator = Some(estimator_name(estimator).to_string());
            }
            MechanismSpec::Additive(noise) => {
                let v = serde_json::to_value(noise).expect("noise serializes");
                j.sigma = noise.sigma();
                j.p = v.get("p").and_then(|x| x.as_f64());
                j.a = v.get("a").and_then(|x| x.as_f64());
                j.d = v.get("d").and_then(|x| x.as_f64());
            }
            MechanismSpec::UnitSplitGaussian { threshold, sigma } => {
                j.sigma = sigma;
                j.threshold = Some(threshold);
            }
        }
        j
    }
}
