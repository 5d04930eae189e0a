//! Scalar abstraction shared by the density family and the optimizer.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the model is computed in: `f32` or `f64`.
///
/// The tolerances are per-type because the hypersphere invariant cannot be
/// held to `1e-12` in single precision.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Allowed deviation of the squared coefficient norm from its target at construction.
    fn norm_tolerance() -> Self;

    /// Looser deviation accepted (then renormalized away) for deserialized parameters.
    fn load_tolerance() -> Self;

    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn norm_tolerance() -> Self {
        1e-12
    }

    fn load_tolerance() -> Self {
        1e-6
    }
}

impl Scalar for f32 {
    fn norm_tolerance() -> Self {
        1e-5
    }

    fn load_tolerance() -> Self {
        1e-4
    }
}

/// Reduces an angle to `[0, period)`, mapping a rounded-up `period` back to 0.
#[inline]
pub(crate) fn reduce_mod<T: Scalar>(x: T, period: T) -> T {
    let r = x % period;
    let r = if r < T::zero() { r + period } else { r };
    if r >= period {
        T::zero()
    } else {
        r
    }
}
