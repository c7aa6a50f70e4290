// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Transformation functions `f(x + a)` and the estimators `g` that map a
//! noisy transformed value back to the scale of the query.

use crate::error::{domain, invalid, Error, Result};
use crate::specfun::{hermite_prob_scaled, HERMITE_MAX_ORDER};
use serde::{Deserialize, Serialize};

/// The concave, strictly increasing transformation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Identity,
    KthRoot(u32),
    Log,
}

/// A transformation `f` together with its offset `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TransformJson", into = "TransformJson")]
pub struct TransformSpec {
    kind: TransformKind,
    a: f64,
}

/// How the noisy transformed value is mapped back to the query scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "estimator", rename_all = "snake_case")]
pub enum EstimatorSpec {
    /// `E[g(f(q + a) + σξ)] = q` exactly.
    MeanUnbiased,
    /// `f⁻¹(v) - a` above `f(a)`, zero below; median equals `q`.
    MedianUnbiased,
    /// `f⁻¹(v) - a` on the whole real line. Biased; kept for comparison.
    #[serde(rename = "naive")]
    NaiveInverse,
}

impl TransformSpec {
    pub fn new(kind: TransformKind, a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(invalid(format!("offset a must be finite, got {a}")));
        }
        match kind {
            TransformKind::Identity if a < 0.0 => {
                return Err(invalid(format!("identity transform requires a >= 0, got {a}")))
            }
            TransformKind::KthRoot(k) => {
                if k == 0 || k > HERMITE_MAX_ORDER {
                    return Err(Error::UnsupportedOrder {
                        order: k,
                        max: HERMITE_MAX_ORDER,
                    });
                }
                if a < 0.0 {
                    return Err(invalid(format!("kth-root transform requires a >= 0, got {a}")));
                }
            }
            TransformKind::Log if a <= 0.0 => {
                return Err(invalid(format!("log transform requires a > 0, got {a}")))
            }
            _ => {}
        }
        Ok(Self { kind, a })
    }

    pub fn identity(a: f64) -> Result<Self> {
        Self::new(TransformKind::Identity, a)
    }

    pub fn kth_root(k: u32, a: f64) -> Result<Self> {
        Self::new(TransformKind::KthRoot(k), a)
    }

    pub fn log(a: f64) -> Result<Self> {
        Self::new(TransformKind::Log, a)
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `f(y)` without the offset.
    pub fn f(&self, y: f64) -> f64 {
        match self.kind {
            TransformKind::Identity => y,
            TransformKind::KthRoot(1) => y,
            TransformKind::KthRoot(2) => y.sqrt(),
            TransformKind::KthRoot(k) => y.powf(1.0 / f64::from(k)),
            TransformKind::Log => y.ln(),
        }
    }

    /// Canonical inverse `f⁻¹(v)`, defined on the whole real line.
    pub fn f_inverse(&self, v: f64) -> f64 {
        match self.kind {
            TransformKind::Identity => v,
            TransformKind::KthRoot(k) => v.powi(k as i32),
            TransformKind::Log => v.exp(),
        }
    }

    /// `f(x + a)`.
    pub fn apply(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(domain(format!("transform input must be >= 0, got {x}")));
        }
        let y = x + self.a;
        if self.kind == TransformKind::Log && y <= 0.0 {
            return Err(domain(format!("log transform needs x + a > 0, got {y}")));
        }
        Ok(self.f(y))
    }

    /// The estimate `g(v)` of the query from a noisy transformed value.
    pub fn estimate(&self, e: EstimatorSpec, sigma: f64, v: f64) -> f64 {
        let a = self.a;
        match e {
            EstimatorSpec::MeanUnbiased => match self.kind {
                TransformKind::Identity => v - a,
                // (-σ)^k He_k(-v/σ) equals σ^k He_k(v/σ) by parity.
                TransformKind::KthRoot(k) => {
                    hermite_prob_scaled(k, v, sigma).expect("order validated at construction") - a
                }
                TransformKind::Log => (v - 0.5 * sigma * sigma).exp() - a,
            },
            EstimatorSpec::MedianUnbiased => {
                if v >= self.f(a) {
                    self.f_inverse(v) - a
                } else {
                    0.0
                }
            }
            EstimatorSpec::NaiveInverse => self.f_inverse(v) - a,
        }
    }

    /// Variance of the mean-unbiased estimate at true query `q`.
    pub fn mechanism_variance(&self, sigma: f64, q: f64) -> f64 {
        let s2 = sigma * sigma;
        let y = q + self.a;
        match self.kind {
            TransformKind::Identity => s2,
            TransformKind::KthRoot(k) => {
                let kf = f64::from(k);
                let mut binom = 1.0;
                let mut total = 0.0;
                for i in 0..k {
                    if i > 0 {
                        binom *= f64::from(k - i + 1) / f64::from(i);
                    }
                    let fact: f64 = (1..=(k - i)).map(f64::from).product();
                    let fi = f64::from(i);
                    total += binom * binom * fact * s2.powi((k - i) as i32) * y.powf(2.0 * fi / kf);
                }
                total
            }
            TransformKind::Log => s2.exp_m1() * y * y,
        }
    }
}

/// `f(x + a)` for the selected transformation.
pub fn apply_transform(t: &TransformSpec, x: f64) -> Result<f64> {
    t.apply(x)
}

/// Estimator `g` applied to a noisy transformed value.
pub fn estimate(t: &TransformSpec, e: EstimatorSpec, sigma: f64, v_noisy: f64) -> f64 {
    t.estimate(e, sigma, v_noisy)
}

/// Variance of the mean-unbiased transformation mechanism at query `q`.
pub fn mechanism_variance(t: &TransformSpec, sigma: f64, q: f64) -> f64 {
    t.mechanism_variance(sigma, q)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransformJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
    #[serde(default)]
    a: f64,
}

impl TryFrom<TransformJson> for TransformSpec {
    type Error = Error;

    fn try_from(j: TransformJson) -> Result<Self> {
        let kind = match j.kind.as_str() {
            "identity" => TransformKind::Identity,
            "kth_root" => TransformKind::KthRoot(
                j.k.ok_or_else(|| invalid("kth_root transform requires field k"))?,
            ),
            "log" => TransformKind::Log,
            other => return Err(invalid(format!("unknown transform kind {other:?}"))),
        };
        Self::new(kind, j.a)
    }
}

impl From<TransformSpec> for TransformJson {
    fn from(t: TransformSpec) -> Self {
        let (kind, k) = match t.kind {
            TransformKind::Identity => ("identity", None),
            TransformKind::KthRoot(k) => ("kth_root", Some(k)),
            TransformKind::Log => ("log", None),
        };
        Self {
            kind: kind.to_string(),
            k,
            a: t.a,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use EstimatorSpec::*;

    #[test]
    fn apply_examples() {
        assert_eq!(TransformSpec::log(1.0).unwrap().apply(0.0).unwrap(), 0.0);
        assert_eq!(TransformSpec::kth_root(4, 0.0).unwrap().apply(10000.0).unwrap(), 10.0);
        assert_eq!(TransformSpec::identity(2.0).unwrap().apply(5.0).unwrap(), 7.0);
        assert!(TransformSpec::identity(0.0).unwrap().apply(-1.0).is_err());
    }

    #[test]
    fn estimator_examples() {
        let t = TransformSpec::kth_root(4, 2.5).unwrap();
        for (sigma, v) in [(1.0f64, 3.0f64), (0.3, -1.2), (2.0, 10.0)] {
            let want = v.powi(4) - 6.0 * v * v * sigma * sigma + 3.0 * sigma.powi(4) - 2.5;
            assert!((t.estimate(MeanUnbiased, sigma, v) - want).abs() < 1e-9 * want.abs().max(1.0));
        }
        let l = TransformSpec::log(1.0).unwrap();
        assert_eq!(l.estimate(MedianUnbiased, 1.0, -5.0), 0.0);
        let i = TransformSpec::identity(0.0).unwrap();
        assert_eq!(i.estimate(MeanUnbiased, 3.0, 10.0), 10.0);
        assert_eq!(l.estimate(NaiveInverse, 1.0, 0.0), 0.0);
    }

    #[test]
    fn variance_examples() {
        let i = TransformSpec::identity(0.0).unwrap();
        assert_eq!(i.mechanism_variance(3.0, 100.0), 9.0);
        let t = TransformSpec::kth_root(2, 1.5).unwrap();
        let (s, q) = (0.7f64, 40.0);
        let want = 2.0 * s.powi(4) + 4.0 * s * s * (q + 1.5);
        assert!((t.mechanism_variance(s, q) - want).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(TransformSpec::log(0.0).is_err());
        assert!(TransformSpec::kth_root(0, 0.0).is_err());
        assert!(TransformSpec::kth_root(21, 0.0).is_err());
        assert!(TransformSpec::identity(-1.0).is_err());
    }

    #[test]
    fn json_forms() {
        let t: TransformSpec = serde_json::from_str(r#"{"kind":"kth_root","k":4,"a":0}"#).unwrap();
        assert_eq!(t.kind(), TransformKind::KthRoot(4));
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<TransformSpec>(&text).unwrap(), t);
        let e: EstimatorSpec = serde_json::from_str(r#"{"estimator":"naive"}"#).unwrap();
        assert_eq!(e, NaiveInverse);
        assert_eq!(
            serde_json::to_string(&MedianUnbiased).unwrap(),
            r#"{"estimator":"median_unbiased"}"#
        );
    }
}
