// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Symmetric additive noise families and seeded sampling.
//!
//! Every family exposes its density, CDF, two-sided tail `P[|Z| > t]`,
//! quantile and variance. Sampling is always inverse-CDF from a uniform
//! variate drawn from an [`RngStream`].

use crate::error::{domain, invalid, Error, Result};
use crate::specfun::{
    gamma_q, ln_fox_wright_upper, ln_gamma, ln_gamma_upper, std_normal_isf, std_normal_quantile,
    std_normal_sf, SeriesTolerance,
};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A reproducible random stream identified by `(seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A uniform variate in the open interval `(0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        let bits = self.rng.next_u64() >> 11;
        (bits as f64 + 0.5) / (1u64 << 53) as f64
    }

    /// A standard normal variate by inversion.
    pub fn std_normal(&mut self) -> f64 {
        std_normal_quantile(self.uniform()).expect("uniform lies in (0, 1)")
    }
}

/// Common interface of the symmetric noise families.
pub trait Noise {
    fn sigma(&self) -> f64;

    fn ln_pdf(&self, z: f64) -> f64;

    fn pdf(&self, z: f64) -> f64 {
        self.ln_pdf(z).exp()
    }

    /// `P[|Z| > t]` for `t >= 0`.
    fn tail(&self, t: f64) -> Result<f64>;

    /// The `t >= 0` with `P[|Z| > t] = prob`, for `prob` in `(0, 1]`.
    fn tail_quantile(&self, prob: f64) -> Result<f64>;

    fn variance(&self) -> Result<f64>;

    fn cdf(&self, z: f64) -> Result<f64> {
        if z.is_nan() {
            return Err(domain("cdf of NaN"));
        }
        let half = 0.5 * self.tail(z.abs())?;
        Ok(if z >= 0.0 { 1.0 - half } else { half })
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(domain(format!("quantile requires 0 < u < 1, got {u}")));
        }
        if u == 0.5 {
            return Ok(0.0);
        }
        if u < 0.5 {
            Ok(-self.tail_quantile(2.0 * u)?)
        } else {
            self.tail_quantile(2.0 * (1.0 - u))
        }
    }

    fn sample(&self, rng: &mut RngStream) -> Result<f64> {
        self.quantile(rng.uniform())
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("sigma must be positive and finite, got {sigma}")))
    }
}

fn check_tail_prob(prob: f64) -> Result<()> {
    if prob > 0.0 && prob <= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("tail probability must lie in (0, 1], got {prob}")))
    }
}

// Solve g(x) = target for a decreasing g on [lo, hi] by Newton steps kept
// inside a shrinking bracket. `g` returns the value and its derivative.
fn solve_decreasing(
    g: impl Fn(f64) -> Result<(f64, f64)>,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    start: f64,
    x_tol: f64,
) -> Result<f64> {
    let mut x = start.clamp(lo, hi);
    for _ in 0..400 {
        let (v, dv) = g(x)?;
        if v == target {
            return Ok(x);
        }
        if v > target {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - (v - target) / dv;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= x_tol || hi - lo <= x_tol {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Gaussian noise `N(0, σ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianNoise {
    sigma: f64,
}

impl GaussianNoise {
    pub fn new(sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(Self { sigma })
    }
}

impl Noise for GaussianNoise {
    fn sigma(&self) -> f64 {
        self.sigma
    }

    fn ln_pdf(&self, z: f64) -> f64 {
        let x = z / self.sigma;
        -0.5 * x * x - (self.sigma * (2.0 * PI).sqrt()).ln()
    }

    fn tail(&self, t: f64) -> Result<f64> {
        Ok(2.0 * std_normal_sf(t.abs() / self.sigma))
    }

    fn tail_quantile(&self, prob: f64) -> Result<f64> {
        check_tail_prob(prob)?;
        if prob == 1.0 {
            return Ok(0.0);
        }
        Ok(self.sigma * std_normal_isf(0.5 * prob)?)
    }

    fn variance(&self) -> Result<f64> {
        Ok(self.sigma * self.sigma)
    }
}

/// Generalized Gaussian noise with density
/// `p / (2σΓ(1/p)) · exp(-(|z|/σ)^p)`, restricted to `0 < p <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenGaussianNoise {
    sigma: f64,
    p: f64,
    ln_norm: f64,
}

impl GenGaussianNoise {
    pub fn new(sigma: f64, p: f64) -> Result<Self> {
        check_sigma(sigma)?;
        if !(p > 0.0 && p <= 1.0) {
            return Err(invalid(format!("generalized Gaussian requires 0 < p <= 1, got {p}")));
        }
        let ln_norm = p.ln() - (2.0 * sigma).ln() - ln_gamma(1.0 / p)?;
        Ok(Self { sigma, p, ln_norm })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl Noise for GenGaussianNoise {
    fn sigma(&self) -> f64 {
        self.sigma
    }

    fn ln_pdf(&self, z: f64) -> f64 {
        self.ln_norm - (z.abs() / self.sigma).powf(self.p)
    }

    fn tail(&self, t: f64) -> Result<f64> {
        gamma_q(1.0 / self.p, (t.abs() / self.sigma).powf(self.p))
    }

    fn tail_quantile(&self, prob: f64) -> Result<f64> {
        check_tail_prob(prob)?;
        if prob == 1.0 {
            return Ok(0.0);
        }
        if self.p == 1.0 {
            return Ok(-self.sigma * prob.ln());
        }
        // Solve Q(s, y) = prob for y = (t/σ)^p in log space.
        let s = 1.0 / self.p;
        let lg = ln_gamma(s)?;
        let target = prob.ln();
        let g = |y: f64| -> Result<(f64, f64)> {
            let lu = ln_gamma_upper(s, y)?;
            let deriv = -((s - 1.0) * y.ln() - y - lu).exp();
            Ok((lu - lg, deriv))
        };
        let mut lo = 0.0;
        let mut hi = s.max(1.0);
        while g(hi)?.0 > target {
            lo = hi;
            hi *= 2.0;
        }
        let y = solve_decreasing(g, target, lo, hi, 0.5 * (lo + hi), 1e-15 * hi)?;
        Ok(self.sigma * y.powf(s))
    }

    fn variance(&self) -> Result<f64> {
        let s = 1.0 / self.p;
        Ok(self.sigma * self.sigma * (ln_gamma(3.0 * s)? - ln_gamma(s)?).exp())
    }
}

/// Exponential polylogarithmic noise with log-density
/// `ln c - d · ln(|z|/σ + a)^p`.
///
/// Requires `a >= e^{p-1}` and either `p > 1, d > 0` or `p = 1, d > 1`.
/// `p = 1` and `p = 2` use closed forms; other `p` use incomplete Fox-Wright
/// series, whose normalizer is computed once at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpPolylogNoise {
    sigma: f64,
    a: f64,
    d: f64,
    p: f64,
    ln_norm: f64,
    // ln Ψ^Γ(p, d ln(a)^p, d^{-1/p}); unused for p in {1, 2}.
    ln_psi0: f64,
    tol: SeriesTolerance,
}

impl ExpPolylogNoise {
    pub fn new(sigma: f64, a: f64, d: f64, p: f64) -> Result<Self> {
        Self::with_tolerance(sigma, a, d, p, SeriesTolerance::default())
    }

    pub fn with_tolerance(sigma: f64, a: f64, d: f64, p: f64, tol: SeriesTolerance) -> Result<Self> {
        check_sigma(sigma)?;
        if !(p >= 1.0) || !p.is_finite() {
            return Err(invalid(format!("exp-polylog requires p >= 1, got {p}")));
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(invalid(format!("exp-polylog requires finite d > 0, got {d}")));
        }
        if p == 1.0 && d <= 1.0 {
            return Err(Error::Divergence(format!("p = 1 requires d > 1, got d = {d}")));
        }
        // Allow a few ulps so that a = e^(p-1) computed by the caller is accepted.
        let a_min = (p - 1.0).exp();
        if !(a >= a_min * (1.0 - 1e-12)) || !a.is_finite() {
            return Err(invalid(format!("exp-polylog requires a >= e^(p-1) = {a_min}, got {a}")));
        }
        let mut noise = Self {
            sigma,
            a,
            d,
            p,
            ln_norm: 0.0,
            ln_psi0: 0.0,
            tol,
        };
        noise.ln_norm = if p == 1.0 {
            (d - 1.0).ln() + (d - 1.0) * a.ln() - (2.0 * sigma).ln()
        } else if p == 2.0 {
            0.5 * d.ln() - 0.25 / d - (2.0 * sigma * PI.sqrt()).ln() - noise.ln_sf_p2(a.ln(), 0.5)
        } else {
            noise.ln_psi0 = noise.ln_psi(noise.x_of(0.0), 1.0)?;
            p.ln() + d.ln() / p - (2.0 * sigma).ln() - noise.ln_psi0
        };
        Ok(noise)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    // ln(1 - κ(x, y)) with κ(x, y) = Φ((ln x - y/d) / (2d)^{-1/2}).
    fn ln_sf_p2(&self, ln_x: f64, y: f64) -> f64 {
        let s = (2.0 * self.d).sqrt();
        std_normal_sf((ln_x - y / self.d) * s).ln()
    }

    // x = d · ln(t/σ + a)^p, the incomplete-gamma limit for |z| = t.
    fn x_of(&self, t: f64) -> f64 {
        self.d * (t / self.sigma + self.a).ln().powf(self.p)
    }

    // ln Ψ^Γ(p, x, scale · d^{-1/p}).
    fn ln_psi(&self, x: f64, scale: f64) -> Result<f64> {
        let c = scale * self.d.powf(-1.0 / self.p);
        ln_fox_wright_upper(self.p, x, c, &self.tol)
    }

    /// `E[Z^{2k}]` from the Fox-Wright moment series.
    ///
    /// Works for every `p`; with `p = 1` it needs `d > 2k + 1`.
    pub fn even_moment_series(&self, k: u32) -> Result<f64> {
        if self.p == 1.0 && self.d <= f64::from(2 * k + 1) {
            return Err(Error::NonexistentMoment(format!(
                "moment {} needs d > {} when p = 1, got d = {}",
                2 * k,
                2 * k + 1,
                self.d
            )));
        }
        let x0 = self.x_of(0.0);
        let ln_base = self.ln_psi(x0, 1.0)?;
        let n = 2 * k;
        let mut sum = 0.0;
        let mut binom = 1.0;
        for j in 0..=n {
            if j > 0 {
                binom *= f64::from(n - j + 1) / f64::from(j);
            }
            let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
            let lpsi = self.ln_psi(x0, f64::from(j + 1))?;
            sum += sign * binom * (f64::from(n - j) * self.a.ln() + lpsi - ln_base).exp();
        }
        Ok(self.sigma.powi(n as i32) * sum)
    }
}

impl Noise for ExpPolylogNoise {
    fn sigma(&self) -> f64 {
        self.sigma
    }

    fn ln_pdf(&self, z: f64) -> f64 {
        self.ln_norm - self.d * (z.abs() / self.sigma + self.a).ln().powf(self.p)
    }

    fn tail(&self, t: f64) -> Result<f64> {
        let t = t.abs();
        if t == 0.0 {
            return Ok(1.0);
        }
        if self.p == 1.0 {
            Ok(((1.0 - self.d) * (t / (self.sigma * self.a)).ln_1p()).exp())
        } else if self.p == 2.0 {
            let ln_x = (t / self.sigma + self.a).ln();
            Ok((self.ln_sf_p2(ln_x, 0.5) - self.ln_sf_p2(self.a.ln(), 0.5)).exp())
        } else {
            let x1 = self.x_of(t);
            Ok((self.ln_psi(x1, 1.0)? - self.ln_psi0).exp().min(1.0))
        }
    }

    fn tail_quantile(&self, prob: f64) -> Result<f64> {
        check_tail_prob(prob)?;
        if prob == 1.0 {
            return Ok(0.0);
        }
        let (sigma, a, d) = (self.sigma, self.a, self.d);
        if self.p == 1.0 {
            return Ok(sigma * a * (prob.ln() / (1.0 - d)).exp_m1());
        }
        if self.p == 2.0 {
            let s = (2.0 * d).sqrt();
            let sf0 = std_normal_sf((a.ln() - 0.5 / d) * s);
            let ln_x = std_normal_isf(prob * sf0)? / s + 0.5 / d;
            return Ok((sigma * (ln_x.exp() - a)).max(0.0));
        }
        let target = prob.ln();
        let g = |t: f64| -> Result<(f64, f64)> {
            let lt = self.tail(t)?.ln();
            let deriv = -2.0 * (self.ln_pdf(t) - lt).exp();
            Ok((lt, deriv))
        };
        let limit = sigma * 1e12;
        let mut lo = 0.0;
        let mut hi = sigma;
        while g(hi)?.0 > target {
            lo = hi;
            hi *= 4.0;
            if hi > limit {
                return Err(Error::Bracketing(format!(
                    "tail probability {prob} lies beyond {limit}"
                )));
            }
        }
        solve_decreasing(g, target, lo, hi, 0.5 * (lo + hi), 1e-12 * sigma)
    }

    fn variance(&self) -> Result<f64> {
        let (sigma, a, d) = (self.sigma, self.a, self.d);
        if self.p == 1.0 {
            if d <= 3.0 {
                return Err(Error::NonexistentMoment(format!(
                    "variance needs d > 3 when p = 1, got d = {d}"
                )));
            }
            let bracket = 1.0 / (d - 3.0) - 2.0 / (d - 2.0) + 1.0 / (d - 1.0);
            return Ok(sigma * sigma * a * a * (d - 1.0) * bracket);
        }
        if self.p == 2.0 {
            let la = a.ln();
            let base = self.ln_sf_p2(la, 0.5);
            let m2 = (2.0 / d + self.ln_sf_p2(la, 1.5) - base).exp();
            let m1 = (0.75 / d + self.ln_sf_p2(la, 1.0) - base).exp();
            return Ok(sigma * sigma * (m2 - 2.0 * a * m1 + a * a));
        }
        self.even_moment_series(1)
    }
}

/// A validated noise family. Invalid parameters never produce a value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NoiseJson", into = "NoiseJson")]
pub enum NoiseSpec {
    Gaussian(GaussianNoise),
    GenGaussian(GenGaussianNoise),
    ExpPolylog(ExpPolylogNoise),
}

impl NoiseSpec {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        GaussianNoise::new(sigma).map(Self::Gaussian)
    }

    pub fn gen_gaussian(sigma: f64, p: f64) -> Result<Self> {
        GenGaussianNoise::new(sigma, p).map(Self::GenGaussian)
    }

    pub fn exp_polylog(sigma: f64, a: f64, d: f64, p: f64) -> Result<Self> {
        ExpPolylogNoise::new(sigma, a, d, p).map(Self::ExpPolylog)
    }

    pub fn family(&self) -> &'static str {
        match self {
            Self::Gaussian(_) => "gaussian",
            Self::GenGaussian(_) => "gen_gaussian",
            Self::ExpPolylog(_) => "exp_polylog",
        }
    }

    fn inner(&self) -> &dyn Noise {
        match self {
            Self::Gaussian(n) => n,
            Self::GenGaussian(n) => n,
            Self::ExpPolylog(n) => n,
        }
    }
}

impl Noise for NoiseSpec {
    fn sigma(&self) -> f64 {
        self.inner().sigma()
    }
    fn ln_pdf(&self, z: f64) -> f64 {
        self.inner().ln_pdf(z)
    }
    fn tail(&self, t: f64) -> Result<f64> {
        self.inner().tail(t)
    }
    fn tail_quantile(&self, prob: f64) -> Result<f64> {
        self.inner().tail_quantile(prob)
    }
    fn variance(&self) -> Result<f64> {
        self.inner().variance()
    }
}

/// Density of `noise` at `z`.
pub fn noise_pdf(noise: &NoiseSpec, z: f64) -> f64 {
    noise.pdf(z)
}

/// CDF of `noise` at `z`.
pub fn noise_cdf(noise: &NoiseSpec, z: f64) -> Result<f64> {
    noise.cdf(z)
}

/// Quantile of `noise` at probability `u`.
pub fn noise_quantile(noise: &NoiseSpec, u: f64) -> Result<f64> {
    noise.quantile(u)
}

/// One inverse-CDF draw from `noise`.
pub fn noise_sample(noise: &NoiseSpec, rng: &mut RngStream) -> Result<f64> {
    noise.sample(rng)
}

/// Variance of `noise`.
pub fn noise_variance(noise: &NoiseSpec) -> Result<f64> {
    noise.variance()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseJson {
    family: String,
    sigma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<f64>,
}

fn required(v: Option<f64>, name: &str, family: &str) -> Result<f64> {
    v.ok_or_else(|| invalid(format!("family {family} requires field {name}")))
}

impl TryFrom<NoiseJson> for NoiseSpec {
    type Error = Error;

    fn try_from(j: NoiseJson) -> Result<Self> {
        match j.family.as_str() {
            "gaussian" => Self::gaussian(j.sigma),
            "gen_gaussian" => Self::gen_gaussian(j.sigma, required(j.p, "p", "gen_gaussian")?),
            "exp_polylog" => Self::exp_polylog(
                j.sigma,
                required(j.a, "a", "exp_polylog")?,
                required(j.d, "d", "exp_polylog")?,
                required(j.p, "p", "exp_polylog")?,
            ),
            other => Err(invalid(format!("unknown noise family {other:?}"))),
        }
    }
}

impl From<NoiseSpec> for NoiseJson {
    fn from(n: NoiseSpec) -> Self {
        let family = n.family().to_string();
        match n {
            NoiseSpec::Gaussian(g) => Self {
                family,
                sigma: g.sigma,
                p: None,
                a: None,
                d: None,
            },
            NoiseSpec::GenGaussian(g) => Self {
                family,
                sigma: g.sigma,
                p: Some(g.p),
                a: None,
                d: None,
            },
            NoiseSpec::ExpPolylog(e) => Self {
                family,
                sigma: e.sigma,
                p: Some(e.p),
                a: Some(e.a),
                d: Some(e.d),
            },
        }
    }
}
