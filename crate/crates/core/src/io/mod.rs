//! Angle-file ingestion, document serialization and density grids.

mod angles;
mod document;
mod grid;

pub use angles::{format_angles, load_angles, parse_angles, Convention, DatasetSpec};
pub use document::{
    fit_document, fit_warnings, load_params, moments_document, save_params, scan_document, scan_table,
    test_document, validate_document, FitDocument, MomentEntry, MomentsDocument, ParamsDocument, ScanDocument,
    TestDocument, FIT_FORMAT, MOMENTS_FORMAT, PARAMS_FORMAT, SCAN_FORMAT, TEST_FORMAT,
};
pub use grid::{density_grid, grid_csv, GridRow};
