use num_complex::Complex;

use super::params::{NntsAxialParams, NntsCircularParams, SymmetricNntsAxialParams};
use super::sample::AxialSample;
use crate::error::{Error, Result};
use crate::scalar::{reduce_mod, Scalar};

/// `|Σ c_k z^k|²` by Horner's rule.
#[inline]
pub(crate) fn modulus_sqr_at<T: Scalar>(coeffs: &[Complex<T>], z: Complex<T>) -> T {
    let mut acc = Complex::new(T::zero(), T::zero());
    for c in coeffs.iter().rev() {
        acc = acc * z + *c;
    }
    acc.norm_sqr()
}

/// Anything that is a density on the axial support `[0, π)`.
pub trait AxialDensity<T: Scalar> {
    /// Density at `theta`; any finite angle is accepted and reduced mod `π`.
    fn density(&self, theta: T) -> T;

    /// Natural log of the density, clamped below at `ln(min_positive)`.
    /// The flag is set when clamping happened.
    fn ln_density_clamped(&self, theta: T) -> (T, bool) {
        let f = self.density(theta);
        if f < T::min_positive_value() {
            (T::min_positive_value().ln(), true)
        } else {
            (f.ln(), false)
        }
    }

    fn free_params(&self) -> usize;
}

impl<T: Scalar> AxialDensity<T> for NntsAxialParams<T> {
    fn density(&self, theta: T) -> T {
        let two = T::one() + T::one();
        let z = Complex::cis(two * theta);
        modulus_sqr_at(self.coefficients(), z) * T::FRAC_1_PI()
    }

    fn free_params(&self) -> usize {
        NntsAxialParams::free_params(self)
    }
}

impl<T: Scalar> AxialDensity<T> for SymmetricNntsAxialParams<T> {
    fn density(&self, theta: T) -> T {
        let two = T::one() + T::one();
        let z = Complex::cis(two * (theta - self.mu()));
        let mut acc = Complex::new(T::zero(), T::zero());
        for &r in self.real_coefficients().iter().rev() {
            acc = acc * z + Complex::new(r, T::zero());
        }
        acc.norm_sqr() * T::FRAC_1_PI()
    }

    fn free_params(&self) -> usize {
        SymmetricNntsAxialParams::free_params(self)
    }
}

impl<T: Scalar> NntsCircularParams<T> {
    /// `|Σ c_k e^{ikφ}|²`; periodic in `φ` with period `2π`.
    pub fn density(&self, phi: T) -> T {
        modulus_sqr_at(self.coefficients(), Complex::cis(reduce_mod(phi, T::TAU())))
    }
}

/// Log-likelihood with the count of density values that had to be clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLikelihood<T> {
    pub value: T,
    pub clamped: usize,
}

pub fn log_likelihood_detailed<T: Scalar, D: AxialDensity<T> + ?Sized>(
    params: &D,
    sample: &AxialSample<T>,
) -> LogLikelihood<T> {
    let mut value = T::zero();
    let mut clamped = 0;
    for &theta in sample.angles() {
        let (l, c) = params.ln_density_clamped(theta);
        value = value + l;
        clamped += usize::from(c);
    }
    LogLikelihood { value, clamped }
}

/// `Σ_i ln f(θ_i)`.
pub fn log_likelihood<T: Scalar, D: AxialDensity<T> + ?Sized>(
    params: &D,
    sample: &AxialSample<T>,
) -> T {
    log_likelihood_detailed(params, sample).value
}

/// Closed-form CDF built from the lag autocorrelations of the coefficient vector.
///
/// `F(θ) = (1/π)[θ + Σ_{d≥1} (Re ρ_d sin 2dθ − Im ρ_d (1 − cos 2dθ)) / d]`
#[derive(Debug, Clone)]
pub struct AxialCdf<'a, T> {
    params: &'a NntsAxialParams<T>,
    lags: Vec<Complex<T>>,
}

impl<'a, T: Scalar> AxialCdf<'a, T> {
    pub fn new(params: &'a NntsAxialParams<T>) -> Self {
        Self {
            params,
            lags: params.autocorrelations(),
        }
    }

    fn eval_unchecked(&self, theta: T) -> T {
        if theta <= T::zero() {
            return T::zero();
        }
        if theta >= T::PI() {
            return T::one();
        }
        let two = T::one() + T::one();
        let mut acc = theta;
        for (d, rho) in self.lags.iter().enumerate().skip(1) {
            let x = two * T::of(d as f64) * theta;
            let (s, c) = x.sin_cos();
            acc = acc + (rho.re * s - rho.im * (T::one() - c)) / T::of(d as f64);
        }
        (acc * T::FRAC_1_PI()).max(T::zero()).min(T::one())
    }

    pub fn cdf(&self, theta: T) -> Result<T> {
        if !(theta >= T::zero() && theta <= T::PI()) {
            return Err(Error::Domain(format!("cdf argument {theta} outside [0, π]")));
        }
        Ok(self.eval_unchecked(theta))
    }

    /// Inverse CDF: bisection on the monotone CDF down to width `1e-12`
    /// (or a few ulps of `π` in low precision), then two Newton steps kept
    /// inside the final bracket.
    pub fn quantile(&self, p: T) -> Result<T> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        if p == T::zero() {
            return Ok(T::zero());
        }
        if p == T::one() {
            return Ok(T::PI());
        }
        let width = T::of(1e-12).max(T::of(8.0) * T::epsilon() * T::PI());
        let (mut lo, mut hi) = (T::zero(), T::PI());
        let half = T::of(0.5);
        // A bounded loop: the interval halves until it can no longer shrink.
        for _ in 0..200 {
            if hi - lo <= width {
                break;
            }
            let mid = (lo + hi) * half;
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval_unchecked(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = (lo + hi) * half;
        for _ in 0..2 {
            let f = self.params.density(x);
            if !(f > T::of(1e-300).max(T::min_positive_value())) {
                break;
            }
            let next = x - (self.eval_unchecked(x) - p) / f;
            if next >= lo && next <= hi {
                x = next;
            }
        }
        Ok(x)
    }
}

impl<T: Scalar> NntsAxialParams<T> {
    /// CDF on `[0, π]`; arguments outside that interval are a domain error.
    pub fn cdf(&self, theta: T) -> Result<T> {
        AxialCdf::new(self).cdf(theta)
    }

    pub fn quantile(&self, p: T) -> Result<T> {
        AxialCdf::new(self).quantile(p)
    }
}
