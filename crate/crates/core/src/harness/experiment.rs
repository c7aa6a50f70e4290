// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! The group-by-sum experiment: noisy sums per group, per-record losses,
//! loss CDFs, ARE summaries by quintile and standard-deviation curves.

use super::data::{groupby_sum, Dataset};
use crate::distributions::{Noise, RngStream};
use crate::error::{invalid, Error, Result};
use crate::mechanisms::MechanismSpec;
use crate::policy::{per_record_sensitivity_sum, LossFlavor, PolicySpec};
use crate::transform::EstimatorSpec;
use serde::{Deserialize, Serialize};
use std::hash::Hasher;

/// Everything needed to run one experiment besides the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mechanism: MechanismSpec,
    pub group_columns: Vec<String>,
    pub value_column: String,
    #[serde(default)]
    pub seed: u64,
    /// Loss values at which the empirical CDF is reported.
    #[serde(default = "default_thresholds")]
    pub thresholds: Vec<f64>,
    /// Clamp noisy sums at 0, the lower end of a sum's domain.
    #[serde(default)]
    pub clamp_output: bool,
    #[serde(default = "default_flavor")]
    pub loss_flavor: LossFlavor,
    /// Query values for the standard-deviation curve.
    #[serde(default)]
    pub sd_grid: Option<Vec<f64>>,
}

fn default_flavor() -> LossFlavor {
    LossFlavor::PRzCDP
}

/// 400 log-spaced points from 1e-3 to 1e7.
pub fn default_thresholds() -> Vec<f64> {
    log_grid(-3.0, 7.0, 400)
}

/// 0 followed by 20 points per decade from 1 to 1e7.
pub fn default_sd_grid() -> Vec<f64> {
    let mut g = vec![0.0];
    g.extend(log_grid(0.0, 7.0, 141));
    g
}

fn log_grid(lo_exp: f64, hi_exp: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 10f64.powf(lo_exp + (hi_exp - lo_exp) * i as f64 / (n - 1) as f64))
        .collect()
}

impl ExperimentConfig {
    pub fn new(mechanism: MechanismSpec, group_columns: Vec<String>, value_column: String) -> Self {
        Self {
            mechanism,
            group_columns,
            value_column,
            seed: 0,
            thresholds: default_thresholds(),
            clamp_output: false,
            loss_flavor: LossFlavor::PRzCDP,
            sd_grid: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.value_column.is_empty() {
            return Err(invalid("value_column must be named"));
        }
        if self.thresholds.iter().any(|t| t.is_nan()) {
            return Err(invalid("thresholds must not be NaN"));
        }
        if self.thresholds.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("thresholds must be strictly increasing"));
        }
        if let Some(grid) = &self.sd_grid {
            if grid.iter().any(|q| !(*q >= 0.0) || !q.is_finite()) {
                return Err(invalid("sd_grid values must be finite and >= 0"));
            }
        }
        // Surfaces e.g. a Gaussian additive mechanism under the PRDP flavor.
        PolicySpec::for_mechanism(&self.mechanism, self.loss_flavor)?;
        Ok(())
    }

    pub fn sd_grid(&self) -> Vec<f64> {
        self.sd_grid.clone().unwrap_or_else(default_sd_grid)
    }
}

/// One group's release.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupResult {
    pub keys: Vec<String>,
    pub count: usize,
    pub true_sum: f64,
    pub noisy_sum: f64,
    /// `None` when the true sum is 0.
    pub are: Option<f64>,
}

/// One record's privacy loss.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordLoss {
    pub keys: Vec<String>,
    pub value: f64,
    pub loss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfPoint {
    pub threshold: f64,
    pub fraction: f64,
}

/// ARE percentiles over one fifth of the groups, ordered by true sum.
/// Bounds are `None` for an empty quintile and percentiles are `None` when
/// every group in the quintile is excluded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuintileSummary {
    pub quintile: usize,
    pub groups: usize,
    pub excluded: usize,
    pub min_true_sum: Option<f64>,
    pub max_true_sum: Option<f64>,
    pub are_p25: Option<f64>,
    pub are_p50: Option<f64>,
    pub are_p75: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdPoint {
    pub q: f64,
    pub sd: f64,
}

/// Result of [`run_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub policy: PolicySpec,
    pub groups: Vec<GroupResult>,
    /// Sorted by key tuple, then value.
    pub records: Vec<RecordLoss>,
    pub loss_cdf: Vec<CdfPoint>,
    pub quintiles: Vec<QuintileSummary>,
    pub sd_curve: Vec<SdPoint>,
}

impl ExperimentReport {
    /// Groups whose ARE is undefined.
    pub fn excluded(&self) -> usize {
        self.groups.iter().filter(|g| g.are.is_none()).count()
    }
}

/// Stable stream id for a key tuple: FNV-1a over the keys joined by 0x1f.
pub fn group_stream_id(keys: &[String]) -> u64 {
    let mut h = fnv::FnvHasher::default();
    for (i, k) in keys.iter().enumerate() {
        if i > 0 {
            h.write(&[0x1f]);
        }
        h.write(k.as_bytes());
    }
    h.finish()
}

/// `|noisy - truth| / |truth|`, or `None` when `truth` is 0.
pub fn are(noisy: f64, truth: f64) -> Option<f64> {
    if truth == 0.0 {
        None
    } else {
        Some((noisy - truth).abs() / truth.abs())
    }
}

/// Fraction of `losses` at or below each threshold.
pub fn privacy_loss_cdf(losses: &[f64], thresholds: &[f64]) -> Vec<CdfPoint> {
    let mut sorted = losses.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    thresholds
        .iter()
        .map(|&t| {
            let below = sorted.partition_point(|&x| x <= t);
            CdfPoint {
                threshold: t,
                fraction: if n == 0 { 0.0 } else { below as f64 / n as f64 },
            }
        })
        .collect()
}

/// Percentile of sorted data by linear interpolation between order
/// statistics; `p` in [0, 1].
pub fn percentile(sorted: &[f64], p: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = p * (sorted.len() - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 >= sorted.len() {
        return Some(sorted[sorted.len() - 1]);
    }
    Some(sorted[i] + frac * (sorted[i + 1] - sorted[i]))
}

/// Split groups into five parts by true sum (ties by key order) with sizes
/// differing by at most one, and summarize the ARE in each.
pub fn are_quintiles(groups: &[GroupResult]) -> Vec<QuintileSummary> {
    let mut order: Vec<&GroupResult> = groups.iter().collect();
    order.sort_by(|a, b| a.true_sum.total_cmp(&b.true_sum).then_with(|| a.keys.cmp(&b.keys)));
    let n = order.len();
    (0..5)
        .map(|i| {
            let part = &order[i * n / 5..(i + 1) * n / 5];
            let mut ares: Vec<f64> = part.iter().filter_map(|g| g.are).collect();
            ares.sort_by(f64::total_cmp);
            QuintileSummary {
                quintile: i + 1,
                groups: part.len(),
                excluded: part.len() - ares.len(),
                min_true_sum: part.first().map(|g| g.true_sum),
                max_true_sum: part.last().map(|g| g.true_sum),
                are_p25: percentile(&ares, 0.25),
                are_p50: percentile(&ares, 0.5),
                are_p75: percentile(&ares, 0.75),
            }
        })
        .collect()
}

const SD_MC_DRAWS: usize = 20_000;
const SD_MC_STREAM: u64 = 0x5d_c0de;

/// Standard deviation of the released value at each true query value.
///
/// Mean-unbiased transformation mechanisms use the closed-form variance;
/// other estimators have none, so a fixed-seed Monte Carlo estimate over
/// 20 000 draws is used. Additive mechanisms are constant in `q`; noise
/// without a finite variance gives infinity.
pub fn sd_curve(m: &MechanismSpec, q_grid: &[f64]) -> Result<Vec<SdPoint>> {
    let constant = match m {
        MechanismSpec::Additive(noise) => Some(match noise.variance() {
            Ok(v) => v.sqrt(),
            Err(Error::NonexistentMoment(_)) => f64::INFINITY,
            Err(e) => return Err(e),
        }),
        MechanismSpec::UnitSplitGaussian { sigma, .. } => Some(*sigma),
        MechanismSpec::Transformation { .. } => None,
    };
    q_grid
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            if !(q >= 0.0) || !q.is_finite() {
                return Err(invalid(format!("sd grid values must be finite and >= 0, got {q}")));
            }
            let sd = match (constant, m) {
                (Some(sd), _) => sd,
                (
                    None,
                    MechanismSpec::Transformation {
                        transform,
                        sigma,
                        estimator: EstimatorSpec::MeanUnbiased,
                    },
                ) => transform.mechanism_variance(*sigma, q).sqrt(),
                (None, _) => {
                    let mut rng = RngStream::new(0, SD_MC_STREAM + i as u64);
                    let draws = (0..SD_MC_DRAWS)
                        .map(|_| m.privatize(q, &mut rng))
                        .collect::<Result<Vec<_>>>()?;
                    let n = draws.len() as f64;
                    let mean = draws.iter().sum::<f64>() / n;
                    (draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
                }
            };
            Ok(SdPoint { q, sd })
        })
        .collect()
}

/// Run the experiment with each group's noise drawn from its own stream
/// `(cfg.seed, group_stream_id(keys))`.
pub fn run_experiment(ds: &Dataset, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    run_with(ds, cfg, |keys, q| {
        let mut rng = RngStream::new(cfg.seed, group_stream_id(keys));
        cfg.mechanism.privatize(q, &mut rng)
    })
}

/// Run the experiment with the mechanism's random draw fixed by `draw`
/// (a standard normal for transformation mechanisms, the noise value
/// otherwise). Useful for testing the pipeline without randomness.
pub fn run_experiment_fixed_draw(
    ds: &Dataset,
    cfg: &ExperimentConfig,
    draw: impl Fn(&[String]) -> f64,
) -> Result<ExperimentReport> {
    run_with(ds, cfg, |keys, q| cfg.mechanism.privatize_with(q, draw(keys)))
}

fn run_with(
    ds: &Dataset,
    cfg: &ExperimentConfig,
    release: impl Fn(&[String], f64) -> Result<f64>,
) -> Result<ExperimentReport> {
    cfg.validate()?;
    if ds.group_columns != cfg.group_columns || ds.value_column != cfg.value_column {
        return Err(invalid("dataset columns do not match the experiment config"));
    }
    let policy = PolicySpec::for_mechanism(&cfg.mechanism, cfg.loss_flavor)?;

    let groups = groupby_sum(ds)
        .into_iter()
        .map(|g| {
            let mut noisy = release(&g.keys, g.sum)?;
            if cfg.clamp_output {
                noisy = noisy.max(0.0);
            }
            Ok(GroupResult {
                are: are(noisy, g.sum),
                keys: g.keys,
                count: g.count,
                true_sum: g.sum,
                noisy_sum: noisy,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sorted: Vec<_> = ds.records.iter().collect();
    sorted.sort_by(|a, b| a.keys.cmp(&b.keys).then_with(|| a.value.total_cmp(&b.value)));
    let mut records = Vec::with_capacity(sorted.len());
    let mut cache: std::collections::HashMap<u64, f64> = std::collections::HashMap::new();
    for r in sorted {
        let loss = match cache.get(&r.value.to_bits()) {
            Some(&l) => l,
            None => {
                let l = policy.eval(per_record_sensitivity_sum(r.value)?)?;
                cache.insert(r.value.to_bits(), l);
                l
            }
        };
        records.push(RecordLoss {
            keys: r.keys.clone(),
            value: r.value,
            loss,
        });
    }

    let losses: Vec<f64> = records.iter().map(|r| r.loss).collect();
    let loss_cdf = privacy_loss_cdf(&losses, &cfg.thresholds);
    let quintiles = are_quintiles(&groups);
    let sd_curve = sd_curve(&cfg.mechanism, &cfg.sd_grid())?;
    Ok(ExperimentReport {
        config: cfg.clone(),
        policy,
        groups,
        records,
        loss_cdf,
        quintiles,
        sd_curve,
    })
}
