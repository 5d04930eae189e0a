//! Axial NNTS densities: non-negative trigonometric sums in the doubled angle
//! `2θ`, for undirected directions on `[0, π)`.
//!
//! The density family, its moments and sampler are generic over the scalar
//! type (`f32` or `f64`); fitting, inference and I/O are provided for `f64`
//! through the aliases below.

// `!(x > y)` comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod family;
pub mod inference;
pub mod io;
pub mod optimizer;
pub mod scalar;

pub use error::{Error, ErrorClass, Result};
pub use family::{
    log_likelihood, AngleUnit, AxialDensity, AxialTransform, NntsAxialParams, NntsCircularParams,
    SymmetricNntsAxialParams,
};
pub use optimizer::{fit_general, fit_general_with_starts, fit_symmetric, FitOptions, FittedParams};
pub use scalar::Scalar;

/// Complex coefficient type.
pub type Complex64 = num_complex::Complex<f64>;

pub type AxialParams = family::NntsAxialParams<f64>;
pub type SymmetricParams = family::SymmetricNntsAxialParams<f64>;
pub type CircularParams = family::NntsCircularParams<f64>;
pub type Sample = family::AxialSample<f64>;
pub type Fit = optimizer::FitResult<f64>;

pub type AxialParams32 = family::NntsAxialParams<f32>;
pub type SymmetricParams32 = family::SymmetricNntsAxialParams<f32>;
pub type Sample32 = family::AxialSample<f32>;

/// Version of the document formats written by [`io`].
pub const FORMAT_VERSION: u32 = 1;
