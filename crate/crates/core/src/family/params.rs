use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{reduce_mod, Scalar};

fn check_finite<T: Scalar>(coeffs: &[Complex<T>]) -> Result<()> {
    if coeffs.is_empty() {
        return Err(Error::ParameterDomain("coefficient vector is empty".into()));
    }
    if let Some(k) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
        return Err(Error::ParameterDomain(format!("coefficient {k} is not finite")));
    }
    Ok(())
}

fn norm_sqr<T: Scalar>(coeffs: &[Complex<T>]) -> T {
    coeffs.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
}

/// Rotates the vector so the first nonzero coefficient is real and non-negative.
fn fix_phase<T: Scalar>(coeffs: &mut [Complex<T>]) {
    let Some(j) = coeffs.iter().position(|c| c.norm_sqr() > T::zero()) else {
        return;
    };
    let lead = coeffs[j];
    if lead.im == T::zero() && lead.re > T::zero() {
        return;
    }
    let modulus = lead.norm();
    let rot = lead.conj() / modulus;
    for c in coeffs.iter_mut() {
        *c = *c * rot;
    }
    coeffs[j] = Complex::new(modulus, T::zero());
}

/// Coefficients `v_0..v_M` of an axial NNTS density on the unit complex hypersphere.
///
/// The density is `(1/π)|Σ v_k e^{i2kθ}|²`. Stored vectors are phase-canonical:
/// the first nonzero coefficient (normally `v_0`) is real and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct NntsAxialParams<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> NntsAxialParams<T> {
    /// Validates the hypersphere constraint and canonicalizes the global phase.
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        check_finite(&coeffs)?;
        let s = norm_sqr(&coeffs);
        if (s - T::one()).abs() > T::norm_tolerance() {
            return Err(Error::Norm {
                norm_sq: s.to_f64_lossy(),
                target: 1.0,
            });
        }
        let mut coeffs = coeffs;
        fix_phase(&mut coeffs);
        Ok(Self { coeffs })
    }

    /// Projects an arbitrary nonzero vector onto the hypersphere.
    pub fn normalized(coeffs: Vec<Complex<T>>) -> Result<Self> {
        check_finite(&coeffs)?;
        let s = norm_sqr(&coeffs);
        if !(s > T::zero()) || !s.is_finite() {
            return Err(Error::ParameterDomain("cannot normalize a zero vector".into()));
        }
        let scale = s.sqrt().recip();
        let mut coeffs: Vec<_> = coeffs.into_iter().map(|c| c * scale).collect();
        fix_phase(&mut coeffs);
        Ok(Self { coeffs })
    }

    /// Accepts coefficients read back from text: renormalized when within the
    /// load tolerance but outside the construction tolerance, rejected beyond it.
    pub fn from_loaded(coeffs: Vec<Complex<T>>) -> Result<Self> {
        check_finite(&coeffs)?;
        let s = norm_sqr(&coeffs);
        let dev = (s - T::one()).abs();
        if dev > T::load_tolerance() {
            return Err(Error::Norm {
                norm_sq: s.to_f64_lossy(),
                target: 1.0,
            });
        }
        if dev > T::norm_tolerance() {
            Self::normalized(coeffs)
        } else {
            let mut coeffs = coeffs;
            fix_phase(&mut coeffs);
            Ok(Self { coeffs })
        }
    }

    /// The `M = 0` uniform density, zero-padded to order `m`.
    pub fn uniform(m: usize) -> Self {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); m + 1];
        coeffs[0] = Complex::new(T::one(), T::zero());
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Trigonometric-sum order `M`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn free_params(&self) -> usize {
        2 * self.order()
    }

    /// Same density expressed at a higher order by appending zero coefficients.
    pub fn zero_padded(&self, m: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if m + 1 > coeffs.len() {
            coeffs.resize(m + 1, Complex::new(T::zero(), T::zero()));
        }
        Self { coeffs }
    }

    /// Density shifted by `delta`: `f_rot(θ) = f(θ - δ)`.
    pub fn rotated(&self, delta: T) -> Self {
        let two = T::one() + T::one();
        let mut coeffs: Vec<_> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| *c * Complex::cis(-two * T::of(k as f64) * delta))
            .collect();
        fix_phase(&mut coeffs);
        Self { coeffs }
    }

    /// Lag autocorrelations `ρ_d = Σ_m v_{m+d} conj(v_m)` for `d = 0..=M`.
    pub fn autocorrelations(&self) -> Vec<Complex<T>> {
        let m = self.order();
        (0..=m)
            .map(|d| {
                (0..=m - d).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
                    acc + self.coeffs[j + d] * self.coeffs[j].conj()
                })
            })
            .collect()
    }
}

/// Real coefficients plus symmetry axis `μ`; general form `v_k = vR_k e^{-i2kμ}`.
///
/// A density symmetric about `μ` is also symmetric about `μ + π/2`, so the axis
/// is identified only modulo `π/2`. Construction keeps `μ` reduced mod `π`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricNntsAxialParams<T> {
    real: Vec<T>,
    mu: T,
}

impl<T: Scalar> SymmetricNntsAxialParams<T> {
    pub fn new(real: Vec<T>, mu: T) -> Result<Self> {
        if real.is_empty() {
            return Err(Error::ParameterDomain("coefficient vector is empty".into()));
        }
        if real.iter().any(|x| !x.is_finite()) || !mu.is_finite() {
            return Err(Error::ParameterDomain("non-finite symmetric parameter".into()));
        }
        let s = real.iter().fold(T::zero(), |a, &x| a + x * x);
        if (s - T::one()).abs() > T::norm_tolerance() {
            return Err(Error::Norm {
                norm_sq: s.to_f64_lossy(),
                target: 1.0,
            });
        }
        Ok(Self::canonical(real, mu))
    }

    pub fn normalized(real: Vec<T>, mu: T) -> Result<Self> {
        let s = real.iter().fold(T::zero(), |a, &x| a + x * x);
        if !(s > T::zero()) || !s.is_finite() || !mu.is_finite() {
            return Err(Error::ParameterDomain("cannot normalize symmetric vector".into()));
        }
        let scale = s.sqrt().recip();
        Ok(Self::canonical(real.into_iter().map(|x| x * scale).collect(), mu))
    }

    pub fn from_loaded(real: Vec<T>, mu: T) -> Result<Self> {
        let s = real.iter().fold(T::zero(), |a, &x| a + x * x);
        let dev = (s - T::one()).abs();
        if dev > T::load_tolerance() || !s.is_finite() {
            return Err(Error::Norm {
                norm_sq: s.to_f64_lossy(),
                target: 1.0,
            });
        }
        if dev > T::norm_tolerance() {
            Self::normalized(real, mu)
        } else {
            Self::new(real, mu)
        }
    }

    fn canonical(mut real: Vec<T>, mu: T) -> Self {
        if let Some(first) = real.iter().find(|x| **x != T::zero()) {
            if *first < T::zero() {
                real.iter_mut().for_each(|x| *x = -*x);
            }
        }
        Self {
            real,
            mu: reduce_mod(mu, T::PI()),
        }
    }

    pub fn real_coefficients(&self) -> &[T] {
        &self.real
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn order(&self) -> usize {
        self.real.len() - 1
    }

    pub fn free_params(&self) -> usize {
        self.order() + 1
    }

    /// Equivalent general parameters, phase-canonicalized.
    pub fn to_general(&self) -> NntsAxialParams<T> {
        let two = T::one() + T::one();
        let mut coeffs: Vec<_> = self
            .real
            .iter()
            .enumerate()
            .map(|(k, &r)| Complex::cis(-two * T::of(k as f64) * self.mu) * r)
            .collect();
        fix_phase(&mut coeffs);
        NntsAxialParams { coeffs }
    }
}

/// Coefficients of a circular NNTS density `|Σ c_k e^{ikφ}|²` with `Σ|c_k|² = 1/(2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NntsCircularParams<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> NntsCircularParams<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        check_finite(&coeffs)?;
        let target = (T::TAU()).recip();
        let s = norm_sqr(&coeffs);
        if (s - target).abs() > T::norm_tolerance() {
            return Err(Error::Norm {
                norm_sq: s.to_f64_lossy(),
                target: target.to_f64_lossy(),
            });
        }
        let mut coeffs = coeffs;
        fix_phase(&mut coeffs);
        Ok(Self { coeffs })
    }

    /// Scales an arbitrary nonzero vector onto the `1/(2π)` sphere.
    pub fn normalized(coeffs: Vec<Complex<T>>) -> Result<Self> {
        check_finite(&coeffs)?;
        let s = norm_sqr(&coeffs);
        if !(s > T::zero()) || !s.is_finite() {
            return Err(Error::ParameterDomain("cannot normalize a zero vector".into()));
        }
        let scale = (s * T::TAU()).sqrt().recip();
        let mut coeffs: Vec<_> = coeffs.into_iter().map(|c| c * scale).collect();
        fix_phase(&mut coeffs);
        Ok(Self { coeffs })
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Embeds an axial density as a circular one of order `2M`:
    /// `c_{2k} = v_k/√(2π)`, odd coefficients zero.
    pub fn from_axial(params: &NntsAxialParams<T>) -> Self {
        let scale = T::TAU().sqrt().recip();
        let zero = Complex::new(T::zero(), T::zero());
        let mut coeffs = vec![zero; 2 * params.order() + 1];
        for (k, v) in params.coefficients().iter().enumerate() {
            coeffs[2 * k] = *v * scale;
        }
        Self { coeffs }
    }
}
