//! Closed-form generalized Hessians of the two multiplicative families.

use num_complex::Complex;

use super::engine::{offsets, GeneralizedHessian};
use super::grid::DataSetGrid;
use crate::error::{Error, Result};
use crate::linalg::{Hermitian, Matrix};
use crate::scalar::Scalar;

/// Hadamard factors of the fraction-family Hessian: `H = neg_ak ∘ outer`.
#[derive(Debug, Clone)]
pub struct HadamardFactors<T> {
    /// PSD block matrix `f · [a(u) a(s)ᵗ / (λ_{m_u}(u) λ_{m_s}(s))]`.
    pub outer: Hermitian<T>,
    /// `-A_k` at the anchor, expanded to constant blocks.
    pub neg_ak: Matrix<T>,
}

fn check_positive<T: Scalar>(grid: &DataSetGrid<T>) -> Result<()> {
    for i in 0..grid.k() {
        if grid.nodes(i).iter().any(|&x| !(x > T::zero())) {
            return Err(Error::InvalidParameter(
                "closed forms need a strictly positive grid".into(),
            ));
        }
    }
    Ok(())
}

fn real<T0>(order: &[usize], f: impl Fn(usize, usize, usize, usize) -> T0) -> Vec<Vec<T0>>
where
    T0: Copy,
{
    let off = offsets(order);
    let size: usize = order.iter().sum();
    let locate = |g: usize| {
        let v = off.iter().rposition(|&o| o <= g).expect("offset 0 exists");
        (v, g - off[v])
    };
    (0..size)
        .map(|r| {
            let (u, p) = locate(r);
            (0..size)
                .map(|c| {
                    let (s, j) = locate(c);
                    f(u, p, s, j)
                })
                .collect()
        })
        .collect()
}

/// Hessian of `Π t_i/(t_i + μ_i)` with `a(i)_p = μ_i/(λ_p(i) + μ_i)`:
/// off-diagonal blocks `f/(λ_{m_u} λ_{m_s}) a(u) a(s)ᵗ`, diagonal blocks
/// `-2 f/(μ_s λ_{m_s}) a(s) a(s)ᵗ`.
pub fn closed_form_hessian_fraction<T: Scalar>(
    mu: &[T],
    grid: &DataSetGrid<T>,
    m: &[usize],
) -> Result<(GeneralizedHessian<T>, HadamardFactors<T>)> {
    if mu.len() != grid.k() || mu.iter().any(|&x| !(x > T::zero())) {
        return Err(Error::InvalidParameter(
            "need one pole > 0 per grid variable".into(),
        ));
    }
    check_positive(grid)?;
    grid.check_index(m)?;
    let order = grid.order();
    let anchor = grid.point(m);
    let f = anchor
        .iter()
        .zip(mu)
        .map(|(&t, &u)| t / (t + u))
        .fold(T::one(), |a, b| a * b);
    let a: Vec<Vec<T>> = (0..grid.k())
        .map(|i| grid.nodes(i).iter().map(|&l| mu[i] / (l + mu[i])).collect())
        .collect();
    let two = T::lit(2.0);

    let h = real(&order, |u, p, s, j| {
        if u == s {
            -two * f / (mu[s] * anchor[s]) * a[s][p] * a[s][j]
        } else {
            f / (anchor[u] * anchor[s]) * a[u][p] * a[s][j]
        }
    });
    let outer = real(&order, |u, p, s, j| {
        f / (anchor[u] * anchor[s]) * a[u][p] * a[s][j]
    });
    let neg_ak = real(&order, |u, _, s, _| {
        if u == s {
            -two * anchor[s] / mu[s]
        } else {
            T::one()
        }
    });

    let to_matrix = |e: &Vec<Vec<T>>| {
        Matrix::from_fn(e.len(), e.len(), |i, j| Complex::new(e[i][j], T::zero()))
    };
    Ok((
        GeneralizedHessian::from_real(order, m.to_vec(), h)?,
        HadamardFactors {
            outer: Hermitian::from_matrix(to_matrix(&outer))?,
            neg_ak: to_matrix(&neg_ak),
        },
    ))
}

/// Hessian of `1/(t_1 ⋯ t_k)`: `f · [c_{us} a(u) a(s)ᵗ]` with `a(i)_p = 1/λ_p(i)`,
/// `c = 2` on diagonal blocks and `1` elsewhere.
pub fn closed_form_hessian_reciprocal<T: Scalar>(
    grid: &DataSetGrid<T>,
    m: &[usize],
) -> Result<GeneralizedHessian<T>> {
    check_positive(grid)?;
    grid.check_index(m)?;
    let order = grid.order();
    let anchor = grid.point(m);
    let f = T::one() / anchor.iter().fold(T::one(), |a, &b| a * b);
    let two = T::lit(2.0);
    let h = real(&order, |u, p, s, j| {
        let c = if u == s { two } else { T::one() };
        c * f / (grid.nodes(u)[p] * grid.nodes(s)[j])
    });
    GeneralizedHessian::from_real(order, m.to_vec(), h)
}
