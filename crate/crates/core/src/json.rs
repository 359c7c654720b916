//! Matrix interchange format: `{"rows": n, "cols": m, "re": [[..]], "im": [[..]]}`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Hermitian, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    /// Omitted imaginary parts mean a real matrix.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix<T: Scalar>(m: &Matrix<T>) -> Self {
        let rows = (0..m.rows()).map(|i| {
            (0..m.cols())
                .map(|j| m[(i, j)].re.to_f64_lossy() + 0.0)
                .collect()
        });
        let im = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| m[(i, j)].im.to_f64_lossy() + 0.0)
                    .collect()
            })
            .collect();
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: rows.collect(),
            im,
        }
    }

    pub fn to_matrix<T: Scalar>(&self) -> Result<Matrix<T>> {
        let check = |part: &[Vec<f64>], name: &str| -> Result<()> {
            if part.len() != self.rows || part.iter().any(|r| r.len() != self.cols) {
                return Err(Error::Parse(format!(
                    "`{name}` is not {}x{}",
                    self.rows, self.cols
                )));
            }
            Ok(())
        };
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Parse("empty matrix".into()));
        }
        check(&self.re, "re")?;
        if !self.im.is_empty() {
            check(&self.im, "im")?;
        }
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let im = self.im.get(i).map_or(0.0, |r| r[j]);
                data.push(Complex::new(T::lit(self.re[i][j]), T::lit(im)));
            }
        }
        if data.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Parse("non-finite matrix entry".into()));
        }
        Matrix::from_vec(self.rows, self.cols, data)
    }

    /// Parses and checks hermiticity to `tol` before symmetrizing.
    pub fn to_hermitian<T: Scalar>(&self, tol: T) -> Result<Hermitian<T>> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!(
                "{}x{} matrix is not square",
                self.rows, self.cols
            )));
        }
        Hermitian::validated(self.to_matrix()?, tol)
    }
}

pub fn matrix_to_value<T: Scalar>(m: &Matrix<T>) -> serde_json::Value {
    serde_json::to_value(MatrixJson::from_matrix(m)).expect("plain data serializes")
}

pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    let j: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_matrix()
}

pub fn parse_hermitian<T: Scalar>(text: &str, tol: T) -> Result<Hermitian<T>> {
    let j: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_hermitian(tol)
}
