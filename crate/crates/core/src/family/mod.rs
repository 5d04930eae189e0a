//! The axial NNTS density family and its closed-form quantities.

mod density;
mod moments;
mod params;
mod sample;

pub use density::{log_likelihood, log_likelihood_detailed, AxialCdf, AxialDensity, LogLikelihood};
pub(crate) use density::modulus_sqr_at;
pub use moments::{SummaryStats, TrigMoment, MEAN_AXIS_EPS};
pub use params::{NntsAxialParams, NntsCircularParams, SymmetricNntsAxialParams};
pub use sample::{AngleUnit, AxialSample, AxialTransform};
