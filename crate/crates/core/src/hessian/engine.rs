//! Generalized Hessian matrices assembled from second-order partial divided differences.

use num_complex::Complex;
use serde::Serialize;

use super::divided::{divided_diff_1, divided_diff_2, ScalarFn};
use super::grid::DataSetGrid;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::funcalc::FunctionSpec;
use crate::linalg::{Hermitian, Matrix};
use crate::scalar::Scalar;

/// The symmetric block matrix `H(m_1, …, m_k)` of size `n_1 + … + n_k`.
#[derive(Debug, Clone)]
pub struct GeneralizedHessian<T> {
    pub order: Vec<usize>,
    /// Zero-based anchor multi-index.
    pub index: Vec<usize>,
    pub matrix: Hermitian<T>,
}

impl<T: Scalar> GeneralizedHessian<T> {
    pub(crate) fn from_real(
        order: Vec<usize>,
        index: Vec<usize>,
        entries: Vec<Vec<T>>,
    ) -> Result<Self> {
        let n = entries.len();
        let m = Matrix::from_fn(n, n, |i, j| Complex::new(entries[i][j], T::zero()));
        Ok(Self {
            order,
            index,
            matrix: Hermitian::from_matrix(m)?,
        })
    }

    pub fn size(&self) -> usize {
        self.matrix.dim()
    }

    fn offsets(&self) -> Vec<usize> {
        offsets(&self.order)
    }

    /// Block `H_{us}` of shape `n_u x n_s`.
    pub fn block(&self, u: usize, s: usize) -> Matrix<T> {
        let off = self.offsets();
        Matrix::from_fn(self.order[u], self.order[s], |p, j| {
            self.matrix[(off[u] + p, off[s] + j)]
        })
    }

    pub fn real_entries(&self) -> Vec<Vec<f64>> {
        let n = self.size();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.matrix[(i, j)].re.to_f64_lossy())
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HessianJson {
    pub order: Vec<usize>,
    pub index: Vec<usize>,
    pub entries: Vec<Vec<f64>>,
}

impl<T: Scalar> From<&GeneralizedHessian<T>> for HessianJson {
    fn from(h: &GeneralizedHessian<T>) -> Self {
        Self {
            order: h.order.clone(),
            index: h.index.clone(),
            entries: h.real_entries(),
        }
    }
}

pub(crate) fn offsets(order: &[usize]) -> Vec<usize> {
    order
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect()
}

fn with_slot<T: Scalar>(base: &[T], slot: usize, x: T) -> Vec<T> {
    let mut p = base.to_vec();
    p[slot] = x;
    p
}

fn with_slots<T: Scalar>(base: &[T], a: usize, x: T, b: usize, y: T) -> Vec<T> {
    let mut p = base.to_vec();
    p[a] = x;
    p[b] = y;
    p
}

/// `f` restricted to variable `s` through `anchor`.
fn section<'a, T: Scalar>(f: &'a FunctionSpec<T>, anchor: &'a [T], s: usize) -> ScalarFn<'a, T> {
    ScalarFn::fallible(
        move |x| Ok(f.eval(&with_slot(anchor, s, x))),
        move |x| {
            f.partial(&with_slot(anchor, s, x), s)
                .ok_or(Error::MissingDerivative { order: 1 })
        },
        move |x| {
            f.second_partial(&with_slot(anchor, s, x), s, s)
                .ok_or(Error::MissingDerivative { order: 2 })
        },
    )
}

/// Mixed first-order divided difference: nodes `(s1, s2)` in variable `s`, `(u1, u2)` in variable `u`.
fn mixed_difference<T: Scalar>(
    f: &FunctionSpec<T>,
    anchor: &[T],
    (s, s1, s2): (usize, T, T),
    (u, u1, u2): (usize, T, T),
    tol: T,
) -> Result<T> {
    // z ↦ [s1, s2] in variable s of f(…, u = z, …)
    let outer = ScalarFn::fallible(
        |z| {
            let inner = ScalarFn::fallible(
                |x| Ok(f.eval(&with_slots(anchor, s, x, u, z))),
                |x| {
                    f.partial(&with_slots(anchor, s, x, u, z), s)
                        .ok_or(Error::MissingDerivative { order: 1 })
                },
                |_| Err(Error::MissingDerivative { order: 2 }),
            );
            divided_diff_1(&inner, s1, s2, tol)
        },
        |z| {
            let inner = ScalarFn::fallible(
                |x| {
                    f.partial(&with_slots(anchor, s, x, u, z), u)
                        .ok_or(Error::MissingDerivative { order: 1 })
                },
                |x| {
                    f.second_partial(&with_slots(anchor, s, x, u, z), s, u)
                        .ok_or(Error::MissingDerivative { order: 2 })
                },
                |_| Err(Error::MissingDerivative { order: 3 }),
            );
            divided_diff_1(&inner, s1, s2, tol)
        },
        |_| Err(Error::MissingDerivative { order: 3 }),
    );
    divided_diff_1(&outer, u1, u2, tol)
}

/// Generalized Hessian of `f` on the data set `grid` anchored at the zero-based multi-index `m`.
pub fn generalized_hessian<T: Scalar>(
    f: &FunctionSpec<T>,
    grid: &DataSetGrid<T>,
    m: &[usize],
) -> Result<GeneralizedHessian<T>> {
    generalized_hessian_with(f, grid, m, &Tolerances::default())
}

pub fn generalized_hessian_with<T: Scalar>(
    f: &FunctionSpec<T>,
    grid: &DataSetGrid<T>,
    m: &[usize],
    tol: &Tolerances<T>,
) -> Result<GeneralizedHessian<T>> {
    if f.arity() != grid.k() {
        return Err(Error::InvalidParameter(format!(
            "function of arity {} on a grid with k = {}",
            f.arity(),
            grid.k()
        )));
    }
    grid.check_index(m)?;
    if let Some(p) = grid.first_outside(f) {
        return Err(Error::SpectrumDomain {
            tuple: p.iter().map(|x| x.to_f64_lossy()).collect(),
        });
    }
    let order = grid.order();
    let off = offsets(&order);
    let size: usize = order.iter().sum();
    let anchor = grid.point(m);
    let dd = tol.divided_difference;
    let two = T::lit(2.0);
    let mut entries = vec![vec![T::zero(); size]; size];

    for s in 0..grid.k() {
        let g = section(f, &anchor, s);
        let ls = grid.nodes(s);
        for p in 0..order[s] {
            for j in p..order[s] {
                let v = two * divided_diff_2(&g, anchor[s], ls[p], ls[j], dd)?;
                entries[off[s] + p][off[s] + j] = v;
                entries[off[s] + j][off[s] + p] = v;
            }
        }
        for u in (s + 1)..grid.k() {
            let lu = grid.nodes(u);
            for p in 0..order[u] {
                for j in 0..order[s] {
                    let v = mixed_difference(
                        f,
                        &anchor,
                        (s, anchor[s], ls[j]),
                        (u, lu[p], anchor[u]),
                        dd,
                    )?;
                    entries[off[u] + p][off[s] + j] = v;
                    entries[off[s] + j][off[u] + p] = v;
                }
            }
        }
    }
    GeneralizedHessian::from_real(order, m.to_vec(), entries)
}
