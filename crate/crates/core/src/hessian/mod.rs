//! Divided differences, data-set grids and generalized Hessian matrices, with
//! semi-definiteness scans as a sufficient test for matrix convexity.

mod closed_form;
mod divided;
mod engine;
mod grid;
mod scan;

pub use closed_form::{
    closed_form_hessian_fraction, closed_form_hessian_reciprocal, HadamardFactors,
};
pub use divided::{divided_diff_1, divided_diff_2, ScalarFn};
pub use engine::{generalized_hessian, generalized_hessian_with, GeneralizedHessian, HessianJson};
pub use grid::{DataSetGrid, GridJson};
pub use scan::{hessian_scan, hessian_scan_with, IndexResult, ScanMode, ScanReport, ScanVerdict};
