//! Information criteria, model scans, chi-square tails and likelihood-ratio tests.

mod chi_square;
mod criteria;
mod lrt;

pub use chi_square::{chi_square_ln_sf, chi_square_sf, ln_gamma, ln_gamma_q};
pub use criteria::{information_criteria, scan_models, ModelScan, ModelScanRow};
pub use lrt::{
    homogeneity_df, homogeneity_from_logliks, homogeneity_test, lrt, nested_test, symmetry_test,
    uniformity_test, LrtReport, LrtResult, TestKind, ORDER_SLACK,
};
