// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Adaptive Gauss-Kronrod (7, 15) quadrature and Gauss-Hermite rules.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 60;

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let (val, err) = gk15(f, a, b);
    if err <= tol.max(1e-15 * val.abs()) || depth >= MAX_DEPTH || b - a <= 1e-14 * a.abs().max(1e-300) {
        return val;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, whole, 0.5 * tol, depth + 1) + adapt(f, m, b, whole, 0.5 * tol, depth + 1)
}

/// Integrate `f` over the finite interval `[a, b]` to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a > b {
        return -integrate(f, b, a, tol);
    }
    let (whole, _) = gk15(&f, a, b);
    adapt(&f, a, b, whole, tol, 0)
}

/// Integrate `f` over `[a, inf)` through the map `x = a + t / (1 - t)`.
pub fn integrate_to_infinity(f: impl Fn(f64) -> f64, a: f64, tol: f64) -> f64 {
    let g = |t: f64| {
        let one_minus = 1.0 - t;
        let x = a + t / one_minus;
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, tol)
}

/// Natural log of `\int exp(h(x)) dx` over the real line.
///
/// `kinks` lists points where `h` is not smooth; the line is split there so
/// each panel is smooth. The integrand is rescaled by the largest value of `h`
/// seen on a probe grid so that huge or tiny magnitudes do not underflow.
pub fn log_integrate(h: impl Fn(f64) -> f64, kinks: &[f64], rel_tol: f64) -> f64 {
    let mut cuts: Vec<f64> = kinks.iter().copied().filter(|x| x.is_finite()).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    if cuts.is_empty() {
        cuts.push(0.0);
    }

    let lo = cuts[0];
    let hi = *cuts.last().unwrap();
    let span = (hi - lo).abs().max(1.0);
    let mut hmax = f64::NEG_INFINITY;
    for &c in &cuts {
        hmax = hmax.max(h(c));
    }
    for i in -400..=400 {
        let x = lo + span * f64::from(i) / 40.0;
        hmax = hmax.max(h(x));
    }
    let g = |x: f64| {
        let v = (h(x) - hmax).exp();
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    // Absolute tolerance relative to the peak of exp(h - hmax) = 1.
    let tol = rel_tol * span.min(1.0);
    let mut total = integrate_to_infinity(|t| g(lo - t), 0.0, tol);
    for w in cuts.windows(2) {
        total += integrate(&g, w[0], w[1], tol);
    }
    total += integrate_to_infinity(&g, hi, tol);
    total.ln() + hmax
}

/// Nodes and weights of the `n`-point probabilists' Gauss-Hermite rule, so
/// that `sum w_i f(x_i)` approximates `E f(Z)` for standard normal `Z`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    // Newton iteration on orthonormal physicists' polynomials.
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let nodes = x.iter().map(|t| t * std::f64::consts::SQRT_2).collect();
    let weights = w.iter().map(|v| v / sqrt_pi).collect();
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x, -1.0, 3.0, 1e-12);
        assert!((v - 12.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_tail_mass() {
        let v = integrate_to_infinity(|x| (-x * x / 2.0).exp(), 0.0, 1e-12);
        assert!((v - (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn log_integrate_normal_density() {
        let c = -0.5 * (2.0 * std::f64::consts::PI).ln();
        let l = log_integrate(|x| c - 0.5 * (x - 3.0) * (x - 3.0), &[0.0, 3.0], 1e-12);
        assert!(l.abs() < 1e-10, "{l}");
    }

    #[test]
    fn hermite_rule_moments() {
        let (x, w) = gauss_hermite(20);
        let m = |k: i32| x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum::<f64>();
        assert!((m(0) - 1.0).abs() < 1e-13);
        assert!((m(2) - 1.0).abs() < 1e-12);
        assert!((m(4) - 3.0).abs() < 1e-11);
        assert!((m(8) - 105.0).abs() < 1e-9);
    }
}
