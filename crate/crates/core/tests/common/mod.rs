//! Test-only oracles. Nothing here calls the closed-form paths under test.
#![allow(dead_code)]

use std::f64::consts::PI;

use nnts_axial::{AxialParams, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random point on the complex unit hypersphere of order `m`.
pub fn random_params(rng: &mut ChaCha8Rng, m: usize) -> AxialParams {
    let coeffs: Vec<Complex64> = (0..=m)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    AxialParams::normalized(coeffs).unwrap()
}

pub fn random_order(rng: &mut ChaCha8Rng, max: usize) -> usize {
    rng.random_range(0..=max)
}

/// Rectangle rule over one full period `[0, period)`; exact for trigonometric
/// polynomials whose frequencies (in cycles per period) are below `n`.
pub fn periodic_rule<F: Fn(f64) -> Complex64>(f: F, period: f64, n: usize) -> Complex64 {
    let h = period / n as f64;
    (0..n).fold(Complex64::new(0.0, 0.0), |acc, j| acc + f(j as f64 * h)) * h
}

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Composite 8-point Gauss–Legendre on `[a, b]` with `panels` panels.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let w = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * w;
        let mid = lo + 0.5 * w;
        let s: f64 = GL_NODES
            .iter()
            .zip(GL_WEIGHTS)
            .map(|(x, wt)| wt * f(mid + 0.5 * w * x))
            .sum();
        total += 0.5 * w * s;
    }
    total
}

/// `ln Γ(df/2)` from exact products: integers via factorials, half-integers via
/// `Γ(n + 1/2) = √π Π_{k<n} (k + 1/2)`.
pub fn ln_gamma_half_integer(df: usize) -> f64 {
    if df.is_multiple_of(2) {
        (1..df / 2).map(|k| (k as f64).ln()).sum()
    } else {
        let n = df / 2;
        0.5 * PI.ln() + (0..n).map(|k| (k as f64 + 0.5).ln()).sum::<f64>()
    }
}

/// `P(χ²_df > x)` by exp-sinh quadrature of the chi-square density on
/// `[x, ∞)`, returned as a natural log. Also returns the change against a
/// half-step refinement as a self-check.
pub fn chi_square_tail_quadrature(x: f64, df: usize) -> (f64, f64) {
    assert!(x > 0.0);
    let a = df as f64 / 2.0;
    let ln_norm = -(a * 2f64.ln()) - ln_gamma_half_integer(df);
    let ln_integrand = |u: f64| ln_norm + (a - 1.0) * (x + u).ln() - 0.5 * (x + u);
    let run = |h: f64| -> f64 {
        // u = exp(π/2 · sinh τ), du = u · π/2 · cosh τ dτ
        let mut logs = Vec::new();
        let kmax = (6.0 / h) as i64;
        for k in -kmax..=kmax {
            let tau = k as f64 * h;
            let s = 0.5 * PI * tau.sinh();
            if s.abs() > 700.0 {
                continue;
            }
            let u = s.exp();
            if u == 0.0 || !u.is_finite() {
                continue;
            }
            let ln_jac = s + (0.5 * PI * tau.cosh()).ln();
            let l = ln_integrand(u) + ln_jac;
            if l.is_finite() {
                logs.push(l);
            }
        }
        let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        max + (logs.iter().map(|l| (l - max).exp()).sum::<f64>() * h).ln()
    };
    let coarse = run(1.0 / 128.0);
    let fine = run(1.0 / 256.0);
    (fine, (fine - coarse).abs())
}

/// Two-sided Kolmogorov–Smirnov distance between a sample and a CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(angles: &[f64], cdf: F) -> f64 {
    let mut sorted = angles.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
