//! Divided differences with derivative fallbacks at (near-)coincident nodes.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

type Callback<'a, T> = Box<dyn Fn(T) -> Result<T> + 'a>;

/// A real function of one variable with optional first and second derivatives.
pub struct ScalarFn<'a, T> {
    value: Callback<'a, T>,
    d1: Option<Callback<'a, T>>,
    d2: Option<Callback<'a, T>>,
}

impl<'a, T: Scalar> ScalarFn<'a, T> {
    pub fn new(value: impl Fn(T) -> T + 'a) -> Self {
        Self {
            value: Box::new(move |x| Ok(value(x))),
            d1: None,
            d2: None,
        }
    }

    pub fn with_derivative(mut self, d1: impl Fn(T) -> T + 'a) -> Self {
        self.d1 = Some(Box::new(move |x| Ok(d1(x))));
        self
    }

    pub fn with_second_derivative(mut self, d2: impl Fn(T) -> T + 'a) -> Self {
        self.d2 = Some(Box::new(move |x| Ok(d2(x))));
        self
    }

    pub(crate) fn fallible(
        value: impl Fn(T) -> Result<T> + 'a,
        d1: impl Fn(T) -> Result<T> + 'a,
        d2: impl Fn(T) -> Result<T> + 'a,
    ) -> Self {
        Self {
            value: Box::new(value),
            d1: Some(Box::new(d1)),
            d2: Some(Box::new(d2)),
        }
    }

    pub fn value(&self, x: T) -> Result<T> {
        (self.value)(x)
    }

    fn derivative(&self, x: T) -> Result<T> {
        self.d1
            .as_ref()
            .ok_or(Error::MissingDerivative { order: 1 })?(x)
    }

    fn second_derivative(&self, x: T) -> Result<T> {
        self.d2
            .as_ref()
            .ok_or(Error::MissingDerivative { order: 2 })?(x)
    }
}

/// `[x, y]_g = (g(x) − g(y))/(x − y)`, or `g'` at the midpoint when `|x − y| ≤ tol`.
pub fn divided_diff_1<T: Scalar>(g: &ScalarFn<'_, T>, x: T, y: T, tol: T) -> Result<T> {
    if (x - y).abs() <= tol {
        g.derivative((x + y) * T::lit(0.5))
    } else {
        Ok((g.value(x)? - g.value(y)?) / (x - y))
    }
}

/// Second divided difference `[x, y, z]_g`, symmetric in its nodes; `g''/2` when all
/// three nodes lie within `tol`.
pub fn divided_diff_2<T: Scalar>(g: &ScalarFn<'_, T>, x: T, y: T, z: T, tol: T) -> Result<T> {
    let mut nodes = [x, y, z];
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let [a, b, c] = nodes;
    if c - a <= tol {
        return Ok(g.second_derivative(b)? * T::lit(0.5));
    }
    Ok((divided_diff_1(g, a, b, tol)? - divided_diff_1(g, b, c, tol)?) / (a - c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-7;

    fn square() -> ScalarFn<'static, f64> {
        ScalarFn::new(|t: f64| t * t)
            .with_derivative(|t| 2.0 * t)
            .with_second_derivative(|_| 2.0)
    }

    #[test]
    fn first_order_examples() {
        assert!((divided_diff_1(&square(), 1.0, 3.0, TOL).unwrap() - 4.0).abs() < 1e-15);
        assert!((divided_diff_1(&square(), 2.0, 2.0, TOL).unwrap() - 4.0).abs() < 1e-15);
        // μ/((x+μ)(y+μ)) with μ = 1
        let frac = ScalarFn::new(|t: f64| t / (t + 1.0));
        assert!((divided_diff_1(&frac, 1.0, 2.0, TOL).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn missing_callback_at_coincidence() {
        let g = ScalarFn::new(|t: f64| t * t);
        assert_eq!(
            divided_diff_1(&g, 2.0, 2.0, TOL),
            Err(Error::MissingDerivative { order: 1 })
        );
        assert_eq!(
            divided_diff_2(&g, 2.0, 2.0, 2.0, TOL),
            Err(Error::MissingDerivative { order: 2 })
        );
    }

    #[test]
    fn second_order_examples() {
        let cube = ScalarFn::new(|t: f64| t * t * t);
        assert!((divided_diff_2(&cube, 1.0, 2.0, 3.0, TOL).unwrap() - 6.0).abs() < 1e-13);
        let recip = ScalarFn::new(|t: f64| 1.0 / t).with_derivative(|t| -1.0 / (t * t));
        // [x, y, z] of 1/t is 1/(xyz)
        assert!((divided_diff_2(&recip, 1.0, 2.0, 2.0, TOL).unwrap() - 0.25).abs() < 1e-14);
        assert!((divided_diff_2(&square(), 2.0, 2.0, 2.0, TOL).unwrap() - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn second_order_is_symmetric(x in 0.1f64..5.0, y in 0.1f64..5.0, z in 0.1f64..5.0) {
            let g = ScalarFn::new(|t: f64| 1.0 / t)
                .with_derivative(|t| -1.0 / (t * t))
                .with_second_derivative(|t| 2.0 / (t * t * t));
            let base = divided_diff_2(&g, x, y, z, TOL).unwrap();
            for (a, b, c) in [(x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)] {
                let v = divided_diff_2(&g, a, b, c, TOL).unwrap();
                prop_assert!((v - base).abs() <= 1e-12 * base.abs().max(1.0));
            }
            prop_assert!((base - 1.0 / (x * y * z)).abs() <= 1e-7 * base.abs().max(1.0));
        }
    }
}
