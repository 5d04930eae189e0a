use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::density::AxialCdf;
use super::params::NntsAxialParams;
use crate::error::{Error, Result};
use crate::scalar::{reduce_mod, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleUnit {
    Radians,
    Degrees,
}

/// How raw measurements were mapped onto the axial support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxialTransform {
    None,
    ModPi,
    DoubledLeaf,
}

/// Axial angles in `[0, π)`, radians.
#[derive(Debug, Clone, PartialEq)]
pub struct AxialSample<T> {
    angles: Vec<T>,
    source_unit: AngleUnit,
    transform: AxialTransform,
}

impl<T: Scalar> AxialSample<T> {
    /// Takes angles already on `[0, π)`; anything else is a data error.
    pub fn new(angles: Vec<T>, source_unit: AngleUnit, transform: AxialTransform) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::Data("sample is empty".into()));
        }
        for (i, &a) in angles.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::Data(format!("angle {i} is not finite")));
            }
            if a < T::zero() || a >= T::PI() {
                return Err(Error::Data(format!("angle {i} = {a} outside [0, π)")));
            }
        }
        Ok(Self {
            angles,
            source_unit,
            transform,
        })
    }

    /// Reduces finite radian angles mod `π`.
    pub fn from_radians_mod_pi(angles: impl IntoIterator<Item = T>) -> Result<Self> {
        let mut out = Vec::new();
        for (i, a) in angles.into_iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::Data(format!("angle {i} is not finite")));
            }
            out.push(reduce_mod(a, T::PI()));
        }
        Self::new(out, AngleUnit::Radians, AxialTransform::ModPi)
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn source_unit(&self) -> AngleUnit {
        self.source_unit
    }

    pub fn transform(&self) -> AxialTransform {
        self.transform
    }

    /// Every angle shifted by `delta`, reduced mod `π`.
    pub fn shifted(&self, delta: T) -> Self {
        Self {
            angles: self.angles.iter().map(|&a| reduce_mod(a + delta, T::PI())).collect(),
            source_unit: self.source_unit,
            transform: self.transform,
        }
    }

    /// Samples concatenated in order; provenance is taken from `self`.
    pub fn concat<'a>(&self, others: impl IntoIterator<Item = &'a AxialSample<T>>) -> Self {
        let mut angles = self.angles.clone();
        for o in others {
            angles.extend_from_slice(&o.angles);
        }
        Self {
            angles,
            source_unit: self.source_unit,
            transform: self.transform,
        }
    }
}

impl<T: Scalar> NntsAxialParams<T> {
    /// `n` inverse-CDF draws from a ChaCha8 stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<AxialSample<T>> {
        if n == 0 {
            return Err(Error::Usage("sample size must be at least 1".into()));
        }
        let cdf = AxialCdf::new(self);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut angles = Vec::with_capacity(n);
        for _ in 0..n {
            let u: f64 = rng.random();
            let q = cdf.quantile(T::of(u))?;
            angles.push(reduce_mod(q, T::PI()));
        }
        AxialSample::new(angles, AngleUnit::Radians, AxialTransform::None)
    }
}
