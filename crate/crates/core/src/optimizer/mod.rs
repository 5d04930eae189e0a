//! Maximum-likelihood fitting of general and symmetric axial NNTS models.

mod ascent;

pub use ascent::{AscentRun, AscentSettings, Objective, StopReason};

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{
    log_likelihood_detailed, AxialDensity, AxialSample, NntsAxialParams, SymmetricNntsAxialParams,
};
use crate::scalar::{reduce_mod, Scalar};

/// Off-leading entries of the deterministic first start.
pub const FIRST_START_EPS: f64 = 0.01;
/// Fits with fewer than `SMALL_SAMPLE_FACTOR · M` observations are flagged.
pub const SMALL_SAMPLE_FACTOR: usize = 7;
const GRID_STAGE_STARTS: usize = 3;
const MU_REFINE_WIDTH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tol_rel: f64,
    pub tol_grad: f64,
    pub seed: u64,
    pub mu_grid_size: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 1000,
            tol_rel: 1e-9,
            tol_grad: 1e-8,
            seed: 0,
            mu_grid_size: 64,
        }
    }
}

impl FitOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 || self.mu_grid_size == 0 {
            return Err(Error::Usage("restarts, max_iterations and mu_grid_size must be >= 1".into()));
        }
        if !(self.tol_rel > 0.0 && self.tol_grad > 0.0) {
            return Err(Error::Usage("tolerances must be positive".into()));
        }
        Ok(())
    }

    fn settings(&self) -> AscentSettings {
        AscentSettings {
            max_iterations: self.max_iterations,
            tol_rel: self.tol_rel,
            tol_grad: self.tol_grad,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FittedParams<T> {
    General(NntsAxialParams<T>),
    Symmetric(SymmetricNntsAxialParams<T>),
}

impl<T: Scalar> FittedParams<T> {
    /// General-form coefficients (symmetric fits are expanded).
    pub fn general(&self) -> NntsAxialParams<T> {
        match self {
            FittedParams::General(p) => p.clone(),
            FittedParams::Symmetric(s) => s.to_general(),
        }
    }

    pub fn free_params(&self) -> usize {
        match self {
            FittedParams::General(p) => p.free_params(),
            FittedParams::Symmetric(s) => s.free_params(),
        }
    }
}

impl<T: Scalar> AxialDensity<T> for FittedParams<T> {
    fn density(&self, theta: T) -> T {
        match self {
            FittedParams::General(p) => p.density(theta),
            FittedParams::Symmetric(s) => s.density(theta),
        }
    }

    fn free_params(&self) -> usize {
        FittedParams::free_params(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<T> {
    pub params: FittedParams<T>,
    /// Maximized log-likelihood, recomputed from the stored parameters.
    pub loglik: T,
    pub order: usize,
    pub n: usize,
    pub free_params: usize,
    /// Whether the winning start stopped on a convergence criterion.
    pub converged: bool,
    pub converged_starts: usize,
    pub starts: usize,
    pub iterations_total: usize,
    pub best_start_index: usize,
    pub stop_reason: StopReason,
    /// `n < 7M`.
    pub small_sample_warning: bool,
    /// Some density value at the optimum fell below the smallest normal number.
    pub density_underflow: bool,
}

fn small_sample(n: usize, m: usize) -> bool {
    n < SMALL_SAMPLE_FACTOR * m
}

fn random_start<T: Scalar>(m: usize, seed: u64, stream: u64, real: bool) -> Vec<Complex<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..=m)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = if real { 0.0 } else { StandardNormal.sample(&mut rng) };
            Complex::new(T::of(re), T::of(im))
        })
        .collect()
}

fn first_start<T: Scalar>(m: usize) -> Vec<Complex<T>> {
    let mut v = vec![Complex::new(T::of(FIRST_START_EPS), T::zero()); m + 1];
    v[0] = Complex::new(T::one(), T::zero());
    v
}

/// Index of the highest log-likelihood; earliest index wins exact ties.
fn best_run<T: Scalar>(runs: &[AscentRun<T>]) -> usize {
    let mut best = 0;
    for (i, r) in runs.iter().enumerate().skip(1) {
        if r.loglik > runs[best].loglik {
            best = i;
        }
    }
    best
}

fn closed_form_uniform<T: Scalar>(sample: &AxialSample<T>, symmetric: bool) -> Result<FitResult<T>> {
    let params = if symmetric {
        FittedParams::Symmetric(SymmetricNntsAxialParams::new(vec![T::one()], T::zero())?)
    } else {
        FittedParams::General(NntsAxialParams::uniform(0))
    };
    let ll = log_likelihood_detailed(&params, sample);
    Ok(FitResult {
        free_params: params.free_params(),
        params,
        loglik: ll.value,
        order: 0,
        n: sample.len(),
        converged: true,
        converged_starts: 1,
        starts: 1,
        iterations_total: 0,
        best_start_index: 0,
        stop_reason: StopReason::ClosedForm,
        small_sample_warning: false,
        density_underflow: ll.clamped > 0,
    })
}

/// Runs every start (in parallel) and returns the runs in start order.
fn run_starts<T: Scalar>(objective: &Objective<T>, starts: &[Vec<Complex<T>>], opts: &FitOptions) -> Vec<AscentRun<T>> {
    let settings = opts.settings();
    starts.par_iter().map(|s| objective.ascend(s, &settings)).collect()
}

/// General-family starts: the deterministic start, then the warm starts
/// (zero-padded to order `m`), then seeded random draws up to `opts.restarts`.
fn general_starts<T: Scalar>(m: usize, warm: &[NntsAxialParams<T>], opts: &FitOptions) -> Vec<Vec<Complex<T>>> {
    let mut starts = vec![first_start(m)];
    for w in warm.iter().filter(|w| w.order() <= m) {
        starts.push(w.zero_padded(m).coefficients().to_vec());
    }
    let total = opts.restarts.max(starts.len());
    for i in starts.len()..total {
        starts.push(random_start(m, opts.seed, i as u64, false));
    }
    starts
}

/// Fits the general model of order `m`. See [`fit_general_with_starts`].
pub fn fit_general<T: Scalar>(sample: &AxialSample<T>, m: usize, opts: &FitOptions) -> Result<FitResult<T>> {
    fit_general_with_starts(sample, m, opts, &[])
}

/// Fits the general model of order `m` from the deterministic start, the given
/// warm starts (lower orders are zero-padded; higher orders are ignored) and
/// seeded random starts. A warm start's log-likelihood is a lower bound on the
/// result because every accepted step is non-decreasing.
pub fn fit_general_with_starts<T: Scalar>(
    sample: &AxialSample<T>,
    m: usize,
    opts: &FitOptions,
    warm: &[NntsAxialParams<T>],
) -> Result<FitResult<T>> {
    opts.validate()?;
    if m == 0 {
        return closed_form_uniform(sample, false);
    }
    let objective = Objective::new(sample.angles(), T::zero(), false);
    let starts = general_starts(m, warm, opts);
    let runs = run_starts(&objective, &starts, opts);
    let best = best_run(&runs);
    let params = NntsAxialParams::normalized(runs[best].coeffs.clone())?;
    let ll = log_likelihood_detailed(&params, sample);
    if !ll.value.is_finite() {
        return Err(Error::Numerical("log-likelihood is not finite at the optimum".into()));
    }
    Ok(FitResult {
        params: FittedParams::General(params),
        loglik: ll.value,
        order: m,
        n: sample.len(),
        free_params: 2 * m,
        converged: runs[best].stop.converged(),
        converged_starts: runs.iter().filter(|r| r.stop.converged()).count(),
        starts: runs.len(),
        iterations_total: runs.iter().map(|r| r.iterations).sum(),
        best_start_index: best,
        stop_reason: runs[best].stop,
        small_sample_warning: small_sample(sample.len(), m),
        density_underflow: ll.clamped > 0,
    })
}

/// Profile fit at one axis value: real ascent on data rotated by `-mu`.
struct Probe<T> {
    mu: T,
    runs: Vec<AscentRun<T>>,
    best: usize,
}

impl<T: Scalar> Probe<T> {
    fn loglik(&self) -> T {
        self.runs[self.best].loglik
    }

    fn coeffs(&self) -> &[Complex<T>] {
        &self.runs[self.best].coeffs
    }

    fn iterations(&self) -> usize {
        self.runs.iter().map(|r| r.iterations).sum()
    }
}

fn probe<T: Scalar>(sample: &AxialSample<T>, mu: T, starts: &[Vec<Complex<T>>], opts: &FitOptions) -> Probe<T> {
    let objective = Objective::new(sample.angles(), mu, true);
    let settings = opts.settings();
    let runs: Vec<_> = starts.iter().map(|s| objective.ascend(s, &settings)).collect();
    let best = best_run(&runs);
    Probe { mu, runs, best }
}

/// Fits the symmetric model `v_k = vR_k e^{-i2kμ}` of order `m`.
///
/// The axis is profiled: a uniform grid of `mu_grid_size` values on `[0, π/2)`
/// (the profile has period `π/2`), golden-section refinement around the best
/// grid point down to width `1e-6` with warm-started re-fits, and a final
/// multi-start fit at the refined axis. The reported axis lies in `[0, π/2)`.
pub fn fit_symmetric<T: Scalar>(sample: &AxialSample<T>, m: usize, opts: &FitOptions) -> Result<FitResult<T>> {
    opts.validate()?;
    if m == 0 {
        return closed_form_uniform(sample, true);
    }
    let quarter = T::FRAC_PI_2();
    let grid = opts.mu_grid_size;
    let spacing = quarter / T::of(grid as f64);

    let mut grid_starts = vec![first_start(m)];
    for i in 1..GRID_STAGE_STARTS.min(opts.restarts) {
        grid_starts.push(random_start(m, opts.seed, i as u64, true));
    }
    let probes: Vec<Probe<T>> = (0..grid)
        .into_par_iter()
        .map(|j| probe(sample, spacing * T::of(j as f64), &grid_starts, opts))
        .collect();
    let mut iterations_total: usize = probes.iter().map(Probe::iterations).sum();
    let mut best_idx = 0;
    for (j, p) in probes.iter().enumerate().skip(1) {
        if p.loglik() > probes[best_idx].loglik() {
            best_idx = j;
        }
    }
    let mut incumbent = (probes[best_idx].mu, probes[best_idx].loglik(), probes[best_idx].coeffs().to_vec());

    if grid > 1 {
        let inv_phi = T::of((5f64.sqrt() - 1.0) / 2.0);
        let (mut a, mut b) = (incumbent.0 - spacing, incumbent.0 + spacing);
        let warm = incumbent.2.clone();
        let mut eval = |mu: T, incumbent: &mut (T, T, Vec<Complex<T>>)| -> T {
            let starts = [warm.clone(), first_start(m)];
            let p = probe(sample, mu, &starts, opts);
            iterations_total += p.iterations();
            if p.loglik() > incumbent.1 {
                *incumbent = (mu, p.loglik(), p.coeffs().to_vec());
            }
            p.loglik()
        };
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = eval(c, &mut incumbent);
        let mut fd = eval(d, &mut incumbent);
        while b - a > T::of(MU_REFINE_WIDTH) {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = eval(c, &mut incumbent);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = eval(d, &mut incumbent);
            }
        }
    }

    // Final multi-start at the refined axis; the incumbent vector is start 1.
    let mu = incumbent.0;
    let mut starts = vec![incumbent.2.clone(), first_start(m)];
    for i in starts.len()..opts.restarts.max(starts.len()) {
        starts.push(random_start(m, opts.seed, i as u64, true));
    }
    let objective = Objective::new(sample.angles(), mu, true);
    let runs = run_starts(&objective, &starts, opts);
    iterations_total += runs.iter().map(|r| r.iterations).sum::<usize>();
    let best = best_run(&runs);

    let real: Vec<T> = runs[best].coeffs.iter().map(|c| c.re).collect();
    let (real, mu) = canonical_axis(real, mu);
    let params = SymmetricNntsAxialParams::normalized(real, mu)?;
    let params = FittedParams::Symmetric(params);
    let ll = log_likelihood_detailed(&params, sample);
    if !ll.value.is_finite() {
        return Err(Error::Numerical("log-likelihood is not finite at the optimum".into()));
    }
    Ok(FitResult {
        free_params: m + 1,
        params,
        loglik: ll.value,
        order: m,
        n: sample.len(),
        converged: runs[best].stop.converged(),
        converged_starts: runs.iter().filter(|r| r.stop.converged()).count(),
        starts: runs.len(),
        iterations_total,
        best_start_index: best,
        stop_reason: runs[best].stop,
        small_sample_warning: small_sample(sample.len(), m),
        density_underflow: ll.clamped > 0,
    })
}

/// Moves the axis into `[0, π/2)`. A shift by `j·π/2` multiplies `vR_k` by `(-1)^{kj}`.
fn canonical_axis<T: Scalar>(mut real: Vec<T>, mu: T) -> (Vec<T>, T) {
    let quarter = T::FRAC_PI_2();
    let r = reduce_mod(mu, quarter);
    let turns = ((mu - r) / quarter).round().to_i64().unwrap_or(0);
    if turns.rem_euclid(2) == 1 {
        real.iter_mut().skip(1).step_by(2).for_each(|x| *x = -*x);
    }
    (real, r)
}
