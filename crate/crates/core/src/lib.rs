//! Numerical laboratory for multivariate matrix functional calculi, matrix means,
//! generalized Hessian matrices and randomized operator-convexity certification.
//!
//! All numerics are generic over the real scalar type (`f32` or `f64`); complex
//! entries are `Complex<T>`. The `f64` aliases below are what the command line and
//! the acceptance suite use.

pub mod certify;
pub mod config;
pub mod domain;
pub mod error;
pub mod funcalc;
pub mod hessian;
pub mod json;
pub mod linalg;
pub mod means;
pub mod scalar;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use scalar::Scalar;

pub use num_complex::Complex;

pub type GeneralMatrix = linalg::Matrix<f64>;
pub type HermitianMatrix = linalg::Hermitian<f64>;
pub type SpectralData = linalg::SpectralData<f64>;
pub type FunctionSpec = funcalc::FunctionSpec<f64>;
pub type TensorVector = funcalc::TensorVector<f64>;
pub type DomainSpec = domain::DomainSpec<f64>;
pub type DataSetGrid = hessian::DataSetGrid<f64>;
pub type GeneralizedHessian = hessian::GeneralizedHessian<f64>;

pub type GeneralMatrix32 = linalg::Matrix<f32>;
pub type HermitianMatrix32 = linalg::Hermitian<f32>;
pub type FunctionSpec32 = funcalc::FunctionSpec<f32>;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeExamples;
