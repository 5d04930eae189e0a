//! Monotone projected ascent of the NNTS log-likelihood on the unit hypersphere.
//!
//! For data `θ_i` write `p_i(v) = Σ_k v_k e^{i2kθ_i}` and `q_i = |p_i|²`. The
//! Wirtinger gradient of `ℓ(v) = Σ ln(q_i/π)` is
//! `g_k(v) = Σ_i e^{-i2kθ_i} p_i / q_i`, and `v^H g(v) = n`, so the tangent
//! component of the gradient is `g − n·v`. One iteration moves along
//! `(g − n·v)/n` from a unit step, retracts by renormalization and halves the
//! step until the log-likelihood does not decrease. A unit step is exactly the
//! fixed-point map `v ← g/‖g‖`; when it is accepted, a step predicted by a
//! quadratic fit of `ℓ` along the direction is also tried.

use num_complex::Complex;

use crate::family::modulus_sqr_at;
use crate::scalar::Scalar;

/// Why a single ascent run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// `M = 0`, nothing to optimize.
    ClosedForm,
    /// Tangent gradient norm below `tol_grad · max(1, n)`.
    GradientNorm,
    /// Relative log-likelihood change below `tol_rel` (including a line search
    /// that found no non-decreasing step).
    RelativeChange,
    MaxIterations,
}

impl StopReason {
    pub fn converged(self) -> bool {
        !matches!(self, StopReason::MaxIterations)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AscentSettings {
    pub max_iterations: usize,
    pub tol_rel: f64,
    pub tol_grad: f64,
}

/// Outcome of one ascent run from one start.
#[derive(Debug, Clone)]
pub struct AscentRun<T> {
    /// Final iterate, unit norm but not phase-canonicalized.
    pub coeffs: Vec<Complex<T>>,
    pub loglik: T,
    pub iterations: usize,
    pub stop: StopReason,
    /// Log-likelihood of the start followed by every accepted iterate.
    pub history: Vec<T>,
}

const MAX_HALVINGS: usize = 50;
const MAX_EXTRAPOLATION: f64 = 64.0;

/// Log-likelihood and gradient evaluator over precomputed `e^{i2θ_i}`.
#[derive(Debug, Clone)]
pub struct Objective<T> {
    z: Vec<Complex<T>>,
    /// Restrict the ascent to real coefficient vectors.
    real: bool,
}

impl<T: Scalar> Objective<T> {
    /// Objective for angles `θ_i − shift`.
    pub fn new(angles: &[T], shift: T, real: bool) -> Self {
        let two = T::one() + T::one();
        Self {
            z: angles.iter().map(|&a| Complex::cis(two * (a - shift))).collect(),
            real,
        }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn loglik(&self, v: &[Complex<T>]) -> T {
        let floor = T::min_positive_value();
        self.z.iter().fold(T::zero(), |acc, &z| {
            acc + (modulus_sqr_at(v, z) * T::FRAC_1_PI()).max(floor).ln()
        })
    }

    /// `g(v)`; real part only in real mode.
    pub fn gradient(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        let floor = T::min_positive_value();
        let mut g = vec![zero; v.len()];
        for &z in &self.z {
            let mut p = zero;
            for c in v.iter().rev() {
                p = p * z + *c;
            }
            let q = p.norm_sqr().max(floor);
            let mut term = p / q;
            let zc = z.conj();
            for gk in g.iter_mut() {
                *gk = *gk + term;
                term = term * zc;
            }
        }
        if self.real {
            g.iter_mut().for_each(|c| c.im = T::zero());
        }
        g
    }

    fn project(&self, v: &mut [Complex<T>]) {
        if self.real {
            v.iter_mut().for_each(|c| c.im = T::zero());
        }
    }

    pub fn ascend(&self, start: &[Complex<T>], settings: &AscentSettings) -> AscentRun<T> {
        let n = T::of(self.n() as f64);
        let grad_tol = T::of(settings.tol_grad) * n.max(T::one());
        let rel_tol = T::of(settings.tol_rel);

        let mut v = start.to_vec();
        self.project(&mut v);
        normalize(&mut v);
        let mut l = self.loglik(&v);
        let mut history = vec![l];
        let mut stop = StopReason::MaxIterations;
        let mut iterations = 0;

        while iterations < settings.max_iterations {
            let g = self.gradient(&v);
            let tangent: Vec<_> = g.iter().zip(&v).map(|(gk, vk)| *gk - *vk * n).collect();
            let tnorm_sq = tangent.iter().fold(T::zero(), |a, c| a + c.norm_sqr());
            if tnorm_sq.sqrt() <= grad_tol {
                stop = StopReason::GradientNorm;
                break;
            }
            let dir: Vec<_> = tangent.iter().map(|c| *c / n).collect();

            let mut step = T::one();
            let mut accepted = None;
            for _ in 0..=MAX_HALVINGS {
                let cand = retract(&v, &dir, step);
                let lc = self.loglik(&cand);
                if lc >= l {
                    accepted = Some((cand, lc));
                    break;
                }
                step = step * T::of(0.5);
            }
            let Some((mut cand, mut lc)) = accepted else {
                stop = StopReason::RelativeChange;
                break;
            };

            if step == T::one() {
                // ℓ(t) ≈ ℓ + s·t + c·t² with slope s = 2‖g − n·v‖²/n.
                let two = T::one() + T::one();
                let slope = two * tnorm_sq / n;
                let curv = lc - l - slope;
                if curv < T::zero() {
                    let t_star = (-slope / (two * curv)).min(T::of(MAX_EXTRAPOLATION));
                    if t_star > T::of(1.5) {
                        let ext = retract(&v, &dir, t_star);
                        let le = self.loglik(&ext);
                        if le > lc {
                            cand = ext;
                            lc = le;
                        }
                    }
                }
            }

            debug_assert!(lc >= l, "ascent step decreased the log-likelihood");
            iterations += 1;
            let change = (lc - l).abs();
            let scale = l.abs().max(T::one());
            v = cand;
            l = lc;
            history.push(l);
            if change <= rel_tol * scale {
                stop = StopReason::RelativeChange;
                break;
            }
        }

        AscentRun {
            coeffs: v,
            loglik: l,
            iterations,
            stop,
            history,
        }
    }

    /// `‖g(v) − n·v‖` at `v`.
    pub fn tangent_gradient_norm(&self, v: &[Complex<T>]) -> T {
        let n = T::of(self.n() as f64);
        self.gradient(v)
            .iter()
            .zip(v)
            .fold(T::zero(), |a, (gk, vk)| a + (*gk - *vk * n).norm_sqr())
            .sqrt()
    }
}

fn normalize<T: Scalar>(v: &mut [Complex<T>]) {
    let s = v.iter().fold(T::zero(), |a, c| a + c.norm_sqr()).sqrt();
    if s > T::zero() {
        v.iter_mut().for_each(|c| *c = *c / s);
    }
}

fn retract<T: Scalar>(v: &[Complex<T>], dir: &[Complex<T>], step: T) -> Vec<Complex<T>> {
    let mut out: Vec<_> = v.iter().zip(dir).map(|(a, d)| *a + *d * step).collect();
    normalize(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings() -> AscentSettings {
        AscentSettings {
            max_iterations: 1000,
            tol_rel: 1e-12,
            tol_grad: 1e-9,
        }
    }

    #[test]
    fn gradient_identity_holds() {
        let angles = [0.1, 0.4, 1.2, 2.0, 2.9, 3.0];
        let obj = Objective::new(&angles, 0.0, false);
        let mut v = vec![Complex::new(0.8, 0.0), Complex::new(0.3, -0.2), Complex::new(0.1, 0.4)];
        normalize(&mut v);
        let g = obj.gradient(&v);
        let vhg = v.iter().zip(&g).fold(Complex::new(0.0, 0.0), |a, (x, y)| a + x.conj() * y);
        assert!((vhg - Complex::new(6.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let angles = [0.3, 0.5, 1.9, 2.2, 0.05];
        let obj = Objective::new(&angles, 0.0, false);
        let v: Vec<Complex<f64>> = vec![Complex::new(0.7, 0.0), Complex::new(0.2, 0.5), Complex::new(-0.3, 0.1)];
        let g = obj.gradient(&v);
        let h = 1e-6;
        for k in 0..v.len() {
            let mut vp = v.clone();
            vp[k].re += h;
            let mut vm = v.clone();
            vm[k].re -= h;
            let d_re = (obj.loglik(&vp) - obj.loglik(&vm)) / (2.0 * h);
            let mut vp = v.clone();
            vp[k].im += h;
            let mut vm = v.clone();
            vm[k].im -= h;
            let d_im = (obj.loglik(&vp) - obj.loglik(&vm)) / (2.0 * h);
            // ∂ℓ/∂Re v_k = 2 Re g_k, ∂ℓ/∂Im v_k = 2 Im g_k
            assert!((d_re - 2.0 * g[k].re).abs() < 1e-5, "re {k}");
            assert!((d_im - 2.0 * g[k].im).abs() < 1e-5, "im {k}");
        }
    }

    #[test]
    fn ascent_is_monotone_and_stationary() {
        let angles: Vec<f64> = (0..80).map(|i| (i * 37 % 101) as f64 / 101.0 * 1.3 + 0.4).collect();
        let obj = Objective::new(&angles, 0.0, false);
        let start = vec![Complex::new(1.0, 0.0), Complex::new(0.01, 0.0), Complex::new(0.01, 0.0)];
        let run = obj.ascend(&start, &settings());
        assert!(run.history.windows(2).all(|w| w[1] >= w[0]));
        assert!(run.stop.converged());
        assert!(run.loglik > run.history[0]);
        let tg = obj.tangent_gradient_norm(&run.coeffs);
        assert!(tg < 1e-4 * angles.len() as f64, "tangent gradient {tg}");
    }

    #[test]
    fn real_mode_stays_real() {
        let angles = [0.2, 0.3, 0.25, 2.9, 3.0, 1.4];
        let obj = Objective::new(&angles, 0.1, true);
        let start = vec![Complex::new(1.0, 0.0), Complex::new(0.01, 0.3)];
        let run = obj.ascend(&start, &settings());
        assert!(run.coeffs.iter().all(|c| c.im == 0.0));
        assert!(run.history.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let angles = [0.2, 0.3, 0.25, 2.9, 3.0, 1.4, 0.9];
        let obj = Objective::new(&angles, 0.0, false);
        let start = vec![Complex::new(1.0, 0.0), Complex::new(0.01, 0.0), Complex::new(0.01, 0.0)];
        let run = obj.ascend(
            &start,
            &AscentSettings {
                max_iterations: 1,
                tol_rel: 1e-300,
                tol_grad: 1e-300,
            },
        );
        assert_eq!(run.iterations, 1);
        assert_eq!(run.stop, StopReason::MaxIterations);
    }
}
