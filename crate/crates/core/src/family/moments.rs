use num_complex::Complex;

use super::params::NntsAxialParams;
use crate::scalar::{reduce_mod, Scalar};

/// `E(e^{irθ})` of an axial density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigMoment<T> {
    pub order: usize,
    pub value: Complex<T>,
}

/// Below this resultant length the mean axis is reported as undefined.
pub const MEAN_AXIS_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats<T> {
    /// `arg(m_2)/2` in `[0, π)`; `None` when the second moment vanishes.
    pub mean_axis: Option<T>,
    pub axial_resultant: T,
    pub circular_variance: T,
}

impl<T: Scalar> NntsAxialParams<T> {
    /// Only pairs with `2(k − m) + r = 0` survive integration over `[0, π)`,
    /// so odd orders vanish and `m_{2j} = Σ_{m=j}^{M} v_{m−j} conj(v_m)`.
    pub fn trig_moment(&self, r: usize) -> TrigMoment<T> {
        let zero = Complex::new(T::zero(), T::zero());
        let value = if r == 0 {
            Complex::new(T::one(), T::zero())
        } else if r % 2 == 1 || r / 2 > self.order() {
            zero
        } else {
            let j = r / 2;
            let v = self.coefficients();
            (j..=self.order()).fold(zero, |acc, m| acc + v[m - j] * v[m].conj())
        };
        TrigMoment { order: r, value }
    }

    /// Mean axis, resultant length and circular variance of the doubled angle.
    pub fn summary_stats(&self) -> SummaryStats<T> {
        let z = self.trig_moment(2).value;
        let resultant = z.norm().min(T::one());
        let mean_axis = if resultant < T::of(MEAN_AXIS_EPS) {
            None
        } else {
            let half = T::of(0.5);
            Some(reduce_mod(z.arg() * half, T::PI()))
        };
        SummaryStats {
            mean_axis,
            axial_resultant: resultant,
            circular_variance: T::one() - resultant,
        }
    }
}
