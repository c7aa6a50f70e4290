// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Per-record privacy loss accounting.
//!
//! A policy function maps the influence `Δ(r)` of a record (its value, for a
//! sum) to the privacy loss that record incurs. Policies are closed values so
//! they can be serialized and published alongside a release.

use crate::distributions::{Noise, NoiseSpec};
use crate::error::{domain, invalid, Error, Result};
use crate::mechanisms::{unit_split_count, MechanismSpec};
use crate::transform::{TransformKind, TransformSpec};
use serde::{Deserialize, Serialize};

/// Which privacy definition a loss value refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossFlavor {
    /// Per-record zero-concentrated DP.
    #[serde(rename = "przcdp")]
    PRzCDP,
    /// Per-record (pure) DP.
    #[serde(rename = "prdp")]
    PRDP,
}

impl LossFlavor {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::PRzCDP => "przcdp",
            Self::PRDP => "prdp",
        }
    }
}

/// Where a policy function comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolicySource {
    /// Transformation mechanism (Gaussian on `f(q + a)`); PRzCDP only.
    Transform { transform: TransformSpec, sigma: f64 },
    /// Additive mechanism with a log-convex density; PRDP, converted to
    /// PRzCDP through `tanh(ε/2)·ε`.
    Additive { noise: NoiseSpec },
    /// Gaussian mechanism on unit-split data; PRzCDP only.
    UnitSplit { rho: f64, threshold: f64 },
    /// The same loss for every record.
    Constant { rho: f64 },
}

/// An evaluable policy function of a given flavor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec {
    pub flavor: LossFlavor,
    pub source: PolicySource,
}

impl PolicySpec {
    pub fn new(flavor: LossFlavor, source: PolicySource) -> Result<Self> {
        match source {
            PolicySource::Transform { sigma, .. } if !(sigma > 0.0) => {
                return Err(invalid(format!("sigma must be positive, got {sigma}")))
            }
            PolicySource::Additive { noise: NoiseSpec::Gaussian(_) } => return Err(Error::Family("gaussian")),
            PolicySource::UnitSplit { rho, threshold } if !(rho >= 0.0) || !(threshold > 0.0) => {
                return Err(invalid(format!(
                    "unit split needs rho >= 0 and threshold > 0, got {rho}, {threshold}"
                )))
            }
            PolicySource::Constant { rho } if !(rho >= 0.0) => {
                return Err(invalid(format!("rho must be >= 0, got {rho}")))
            }
            _ => {}
        }
        Ok(Self { flavor, source })
    }

    /// The policy of a mechanism for a sum query. Gaussian noise is treated as
    /// the identity transformation with offset 0.
    pub fn for_mechanism(m: &MechanismSpec, flavor: LossFlavor) -> Result<Self> {
        let source = match *m {
            MechanismSpec::Transformation { transform, sigma, .. } => PolicySource::Transform { transform, sigma },
            MechanismSpec::Additive(NoiseSpec::Gaussian(g)) => PolicySource::Transform {
                transform: TransformSpec::identity(0.0)?,
                sigma: g.sigma(),
            },
            MechanismSpec::Additive(noise) => PolicySource::Additive { noise },
            MechanismSpec::UnitSplitGaussian { threshold, sigma } => PolicySource::UnitSplit {
                rho: gaussian_zcdp_loss(threshold, sigma)?,
                threshold,
            },
        };
        Self::new(flavor, source)
    }

    /// Loss of a record with influence `delta`. Gaussian-based sources have no
    /// finite PRDP loss for `delta > 0` and return infinity in that flavor.
    pub fn eval(&self, delta: f64) -> Result<f64> {
        check_delta(delta)?;
        match (self.source, self.flavor) {
            (PolicySource::Constant { rho }, _) => Ok(rho),
            (PolicySource::Additive { noise }, flavor) => {
                let eps = additive_prdp_loss(&noise, delta)?;
                Ok(match flavor {
                    LossFlavor::PRDP => eps,
                    LossFlavor::PRzCDP => prdp_to_przcdp(eps),
                })
            }
            (PolicySource::Transform { transform, sigma }, LossFlavor::PRzCDP) => {
                transform_policy_loss(&transform, sigma, delta)
            }
            (PolicySource::UnitSplit { rho, threshold }, LossFlavor::PRzCDP) => {
                unit_split_loss(delta, threshold, rho)
            }
            (_, LossFlavor::PRDP) => Ok(if delta == 0.0 { 0.0 } else { f64::INFINITY }),
        }
    }
}

/// A closed, serializable policy expression built from [`PolicySpec`] leaves
/// with sequential (pointwise sum) and parallel (pointwise max) composition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum PolicyEval {
    Leaf { policy: PolicySpec },
    Sum { parts: Vec<PolicyEval> },
    Max { parts: Vec<PolicyEval> },
}

impl From<PolicySpec> for PolicyEval {
    fn from(policy: PolicySpec) -> Self {
        Self::Leaf { policy }
    }
}

impl PolicyEval {
    pub fn flavor(&self) -> LossFlavor {
        match self {
            Self::Leaf { policy } => policy.flavor,
            Self::Sum { parts } | Self::Max { parts } => parts[0].flavor(),
        }
    }

    pub fn eval(&self, delta: f64) -> Result<f64> {
        match self {
            Self::Leaf { policy } => policy.eval(delta),
            Self::Sum { parts } => parts.iter().try_fold(0.0, |acc, p| Ok(acc + p.eval(delta)?)),
            Self::Max { parts } => parts.iter().try_fold(0.0f64, |acc, p| Ok(acc.max(p.eval(delta)?))),
        }
    }
}

fn check_same_flavor(p1: &PolicyEval, p2: &PolicyEval) -> Result<()> {
    if p1.flavor() == p2.flavor() {
        Ok(())
    } else {
        Err(invalid(format!(
            "cannot compose {} with {} policies",
            p1.flavor().as_str(),
            p2.flavor().as_str()
        )))
    }
}

/// Sequential composition: losses add pointwise.
pub fn compose_sequential(p1: PolicyEval, p2: PolicyEval) -> Result<PolicyEval> {
    check_same_flavor(&p1, &p2)?;
    Ok(PolicyEval::Sum { parts: vec![p1, p2] })
}

/// Parallel composition over disjoint partitions: pointwise maximum.
pub fn compose_parallel(p1: PolicyEval, p2: PolicyEval) -> Result<PolicyEval> {
    check_same_flavor(&p1, &p2)?;
    Ok(PolicyEval::Max { parts: vec![p1, p2] })
}

fn check_delta(delta: f64) -> Result<()> {
    if delta >= 0.0 && !delta.is_nan() {
        Ok(())
    } else {
        Err(domain(format!("record influence must be >= 0, got {delta}")))
    }
}

/// Per-record sensitivity of a sum query: the record's value.
pub fn per_record_sensitivity_sum(value: f64) -> Result<f64> {
    check_delta(value)?;
    Ok(value)
}

// |f(x + a) - f(y + a)| without cancellation for the log transform.
fn transform_gap(t: &TransformSpec, x: f64, y: f64) -> Result<f64> {
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    if t.kind() == TransformKind::Log {
        t.apply(lo)?;
        return Ok(((hi - lo) / (lo + t.a())).ln_1p());
    }
    Ok(t.apply(hi)? - t.apply(lo)?)
}

/// PRzCDP loss `|f(Δ + a) - f(a)|² / (2σ²)` of the transformation mechanism.
pub fn transform_policy_loss(t: &TransformSpec, sigma: f64, delta_r: f64) -> Result<f64> {
    check_delta(delta_r)?;
    let gap = transform_gap(t, delta_r, 0.0)?;
    Ok(gap * gap / (2.0 * sigma * sigma))
}

/// PRDP loss `f(0) - f(Δ)` of an additive mechanism with log-density `f(|z|)`.
pub fn additive_prdp_loss(noise: &NoiseSpec, delta_r: f64) -> Result<f64> {
    check_delta(delta_r)?;
    match noise {
        NoiseSpec::Gaussian(_) => Err(Error::Family("gaussian")),
        NoiseSpec::GenGaussian(g) => Ok((delta_r / g.sigma()).powf(g.p())),
        NoiseSpec::ExpPolylog(e) => {
            let la = e.a().ln();
            let lx = (delta_r / (e.sigma() * e.a())).ln_1p() + la;
            Ok(e.d() * (lx.powf(e.p()) - la.powf(e.p())))
        }
    }
}

/// PRDP to PRzCDP conversion `tanh(ε/2)·ε`.
pub fn prdp_to_przcdp(eps: f64) -> f64 {
    if eps == f64::INFINITY {
        return eps;
    }
    (0.5 * eps).tanh() * eps
}

/// zCDP loss `Δ² / (2σ²)` of the Gaussian mechanism.
pub fn gaussian_zcdp_loss(delta: f64, sigma: f64) -> Result<f64> {
    check_delta(delta)?;
    if !(sigma > 0.0) {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    Ok(delta * delta / (2.0 * sigma * sigma))
}

/// Unit-splitting loss `ρ · A(r)²`.
pub fn unit_split_loss(value: f64, threshold: f64, rho: f64) -> Result<f64> {
    let n = unit_split_count(value, threshold)? as f64;
    Ok(rho * n * n)
}

/// Coefficient `J · Σ P(r_j)` multiplying `α` for a group of `J` records.
pub fn group_loss_coefficient(losses: &[f64]) -> Result<f64> {
    if losses.is_empty() {
        return Err(invalid("group must contain at least one record"));
    }
    if let Some(bad) = losses.iter().find(|l| !(**l >= 0.0)) {
        return Err(domain(format!("losses must be >= 0, got {bad}")));
    }
    Ok(losses.len() as f64 * losses.iter().sum::<f64>())
}

/// Two values of the same record in bounded neighboring databases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifferingPair {
    r_value: f64,
    r_prime_value: f64,
}

impl DifferingPair {
    pub fn new(r_value: f64, r_prime_value: f64) -> Result<Self> {
        check_delta(r_value)?;
        check_delta(r_prime_value)?;
        Ok(Self {
            r_value,
            r_prime_value,
        })
    }

    /// `r' = r + δ`.
    pub fn additive(r: f64, delta: f64) -> Result<Self> {
        Self::new(r, r + delta)
    }

    /// `r' = δ · r`.
    pub fn multiplicative(r: f64, delta: f64) -> Result<Self> {
        Self::new(r, delta * r)
    }

    pub fn r(&self) -> f64 {
        self.r_value
    }

    pub fn r_prime(&self) -> f64 {
        self.r_prime_value
    }
}

/// Bounded PRzCDP loss `|f(r + a) - f(r' + a)|² / (2σ²)` of the transformation
/// mechanism on a global sum.
pub fn bounded_transform_policy(t: &TransformSpec, sigma: f64, pair: DifferingPair) -> Result<f64> {
    let gap = transform_gap(t, pair.r_value, pair.r_prime_value)?;
    Ok(gap * gap / (2.0 * sigma * sigma))
}

/// Bounded PRDP loss `f(0) - f(|r - r'|)` of an additive mechanism.
pub fn bounded_additive_prdp(noise: &NoiseSpec, pair: DifferingPair) -> Result<f64> {
    additive_prdp_loss(noise, (pair.r_value - pair.r_prime_value).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn worked_examples() {
        let t = TransformSpec::kth_root(4, 0.0).unwrap();
        assert!((transform_policy_loss(&t, 2.0, 10000.0).unwrap() - 12.5).abs() < 1e-12);
        let l = TransformSpec::log(1.0).unwrap();
        let want = 10001f64.ln().powi(2) / 8.0;
        assert!((transform_policy_loss(&l, 2.0, 10000.0).unwrap() - want).abs() < 1e-12);
        assert_eq!(transform_policy_loss(&l, 2.0, 0.0).unwrap(), 0.0);
        assert_eq!(unit_split_loss(10000.0, 10.0, 1.0).unwrap(), 1e6);
        assert_eq!(unit_split_loss(30.0, 10.0, 1.0).unwrap(), 9.0);
        assert_eq!(unit_split_loss(5.0, 10.0, 1.0).unwrap(), 1.0);
        assert!((gaussian_zcdp_loss(10.0, 50f64.sqrt()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn additive_losses() {
        let g = NoiseSpec::gen_gaussian(91.0, 0.5).unwrap();
        assert!((additive_prdp_loss(&g, 8281.0).unwrap() - 91f64.sqrt()).abs() < 1e-12);
        let e = NoiseSpec::exp_polylog(1.0, E, 0.145, 2.0).unwrap();
        assert_eq!(additive_prdp_loss(&e, 0.0).unwrap(), 0.0);
        let n = NoiseSpec::gaussian(1.0).unwrap();
        assert!(matches!(additive_prdp_loss(&n, 1.0), Err(Error::Family(_))));
    }

    #[test]
    fn tanh_conversion() {
        assert_eq!(prdp_to_przcdp(0.0), 0.0);
        assert!((prdp_to_przcdp(2.0) - 1.523_188_311_911_529_8).abs() < 1e-15);
        assert!(prdp_to_przcdp(20.0) < 20.0 && prdp_to_przcdp(20.0) > 20.0 - 1e-6);
        // tanh rounds to exactly 1 once ε/2 exceeds about 19.
        assert_eq!(prdp_to_przcdp(100.0), 100.0);
    }

    #[test]
    fn group_coefficient() {
        assert_eq!(group_loss_coefficient(&[0.7]).unwrap(), 0.7);
        assert_eq!(group_loss_coefficient(&[1.0, 1.0, 1.0]).unwrap(), 9.0);
        assert!((group_loss_coefficient(&[0.4, 0.7, 1.2]).unwrap() - 6.9).abs() < 1e-12);
        assert!(group_loss_coefficient(&[]).is_err());
    }

    #[test]
    fn composition() {
        let rho = PolicySpec::new(LossFlavor::PRzCDP, PolicySource::Constant { rho: 0.5 }).unwrap();
        let t = TransformSpec::kth_root(4, 0.0).unwrap();
        let tp = PolicySpec::new(LossFlavor::PRzCDP, PolicySource::Transform { transform: t, sigma: 2.0 }).unwrap();
        let seq = compose_sequential(rho.into(), tp.into()).unwrap();
        let want = 0.5 + transform_policy_loss(&t, 2.0, 10.0).unwrap();
        assert!((seq.eval(10.0).unwrap() - want).abs() < 1e-15);
        let par = compose_parallel(rho.into(), tp.into()).unwrap();
        assert_eq!(par.eval(10000.0).unwrap(), 12.5);
        assert_eq!(par.eval(0.0).unwrap(), 0.5);
        let prdp = PolicySpec::new(LossFlavor::PRDP, PolicySource::Constant { rho: 1.0 }).unwrap();
        assert!(compose_sequential(rho.into(), prdp.into()).is_err());
        let text = serde_json::to_string(&seq).unwrap();
        assert_eq!(serde_json::from_str::<PolicyEval>(&text).unwrap(), seq);
    }

    #[test]
    fn bounded_examples() {
        let i = TransformSpec::identity(3.0).unwrap();
        let pair = DifferingPair::additive(10.0, 4.0).unwrap();
        assert!((bounded_transform_policy(&i, 2.0, pair).unwrap() - 2.0).abs() < 1e-12);
        let same = DifferingPair::new(7.0, 7.0).unwrap();
        assert_eq!(bounded_transform_policy(&i, 2.0, same).unwrap(), 0.0);
        let g = NoiseSpec::gen_gaussian(2.0, 0.5).unwrap();
        for r in [0.0, 10.0, 1e6] {
            let v = bounded_additive_prdp(&g, DifferingPair::additive(r, 8.0).unwrap()).unwrap();
            assert!((v - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_sources_have_no_finite_prdp() {
        let m = MechanismSpec::additive(NoiseSpec::gaussian(1.0).unwrap());
        let p = PolicySpec::for_mechanism(&m, LossFlavor::PRDP).unwrap();
        assert_eq!(p.eval(1.0).unwrap(), f64::INFINITY);
        assert_eq!(p.eval(0.0).unwrap(), 0.0);
        let z = PolicySpec::for_mechanism(&m, LossFlavor::PRzCDP).unwrap();
        assert_eq!(z.eval(2.0).unwrap(), 2.0);
    }
}
