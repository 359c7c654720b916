//! Symbolic descriptions of the scalar functions fed to the functional calculi.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

type ValueFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;
type DomainFn<T> = Arc<dyn Fn(&[T]) -> bool + Send + Sync>;
type GradientFn<T> = Arc<dyn Fn(&[T], usize) -> T + Send + Sync>;
type HessianFn<T> = Arc<dyn Fn(&[T], usize, usize) -> T + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    ExponentProduct,
    FractionProduct,
    ReciprocalProduct,
    ResolventSum,
    Custom,
}

/// A user-supplied scalar function of `arity` real variables.
///
/// Derivative callbacks are optional; divided differences at coincident nodes fail
/// with [`Error::MissingDerivative`] when they are absent.
#[derive(Clone)]
pub struct CustomFunction<T> {
    pub name: String,
    pub arity: usize,
    value: ValueFn<T>,
    domain: DomainFn<T>,
    gradient: Option<GradientFn<T>>,
    hessian: Option<HessianFn<T>>,
}

impl<T: Scalar> CustomFunction<T> {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        value: impl Fn(&[T]) -> T + Send + Sync + 'static,
        domain: impl Fn(&[T]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            arity,
            value: Arc::new(value),
            domain: Arc::new(domain),
            gradient: None,
            hessian: None,
        }
    }

    /// Partial derivative `∂f/∂t_i`.
    pub fn with_gradient(mut self, g: impl Fn(&[T], usize) -> T + Send + Sync + 'static) -> Self {
        self.gradient = Some(Arc::new(g));
        self
    }

    /// Second partial derivative `∂²f/∂t_i∂t_j`.
    pub fn with_hessian(
        mut self,
        h: impl Fn(&[T], usize, usize) -> T + Send + Sync + 'static,
    ) -> Self {
        self.hessian = Some(Arc::new(h));
        self
    }
}

impl<T> fmt::Debug for CustomFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFunction")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("gradient", &self.gradient.is_some())
            .field("hessian", &self.hessian.is_some())
            .finish()
    }
}

/// The scalar function `f` of `k` variables behind a functional calculus.
#[derive(Clone, Debug)]
pub enum FunctionSpec<T> {
    /// `t_1^{p_1} ⋯ t_k^{p_k}`, `p_i ≥ 0`.
    ExponentProduct {
        p: Vec<T>,
    },
    /// `Π t_i / (t_i + μ_i)`, `μ_i > 0`.
    FractionProduct {
        mu: Vec<T>,
    },
    /// `1 / (t_1^{p_1} ⋯ t_k^{p_k})`, `p_i ∈ [0, 1]`.
    ReciprocalProduct {
        p: Vec<T>,
    },
    /// `β + Σ w_i / (t + s_i)`, one variable, `s_i ≥ 0`, `w_i > 0`.
    ResolventSum {
        beta: T,
        nodes: Vec<T>,
        weights: Vec<T>,
    },
    Custom(CustomFunction<T>),
}

fn positive_orthant<T: Scalar>(t: &[T]) -> bool {
    t.iter().all(|&x| x > T::zero() && x.is_finite())
}

impl<T: Scalar> FunctionSpec<T> {
    pub fn exponent_product(p: Vec<T>) -> Result<Self> {
        if p.is_empty() || p.iter().any(|&x| !(x >= T::zero()) || !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "exponent_product needs finite exponents >= 0".into(),
            ));
        }
        Ok(Self::ExponentProduct { p })
    }

    pub fn fraction_product(mu: Vec<T>) -> Result<Self> {
        if mu.is_empty() || mu.iter().any(|&x| !(x > T::zero()) || !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "fraction_product needs finite poles > 0".into(),
            ));
        }
        Ok(Self::FractionProduct { mu })
    }

    pub fn reciprocal_product(p: Vec<T>) -> Result<Self> {
        if p.is_empty() || p.iter().any(|&x| !(x >= T::zero() && x <= T::one())) {
            return Err(Error::InvalidParameter(
                "reciprocal_product needs exponents in [0, 1]".into(),
            ));
        }
        Ok(Self::ReciprocalProduct { p })
    }

    pub fn resolvent_sum(beta: T, nodes: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::InvalidParameter(
                "resolvent_sum needs one weight per node".into(),
            ));
        }
        if !beta.is_finite()
            || nodes.iter().any(|&s| !(s >= T::zero()) || !s.is_finite())
            || weights.iter().any(|&w| !(w > T::zero()) || !w.is_finite())
        {
            return Err(Error::InvalidParameter(
                "resolvent_sum needs finite beta, nodes >= 0 and weights > 0".into(),
            ));
        }
        Ok(Self::ResolventSum {
            beta,
            nodes,
            weights,
        })
    }

    pub fn custom(f: CustomFunction<T>) -> Result<Self> {
        if f.arity == 0 {
            return Err(Error::InvalidParameter(
                "custom function needs arity >= 1".into(),
            ));
        }
        Ok(Self::Custom(f))
    }

    /// The constant function 1 of `k` variables.
    pub fn constant_one(k: usize) -> Self {
        Self::ExponentProduct {
            p: vec![T::zero(); k],
        }
    }

    pub fn kind(&self) -> FunctionKind {
        match self {
            Self::ExponentProduct { .. } => FunctionKind::ExponentProduct,
            Self::FractionProduct { .. } => FunctionKind::FractionProduct,
            Self::ReciprocalProduct { .. } => FunctionKind::ReciprocalProduct,
            Self::ResolventSum { .. } => FunctionKind::ResolventSum,
            Self::Custom(_) => FunctionKind::Custom,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Self::ExponentProduct { p } | Self::ReciprocalProduct { p } => p.len(),
            Self::FractionProduct { mu } => mu.len(),
            Self::ResolventSum { .. } => 1,
            Self::Custom(c) => c.arity,
        }
    }

    /// Natural domain membership of a point.
    pub fn in_domain(&self, t: &[T]) -> bool {
        if t.len() != self.arity() {
            return false;
        }
        match self {
            Self::Custom(c) => (c.domain)(t),
            _ => positive_orthant(t),
        }
    }

    pub fn eval(&self, t: &[T]) -> T {
        debug_assert_eq!(t.len(), self.arity());
        match self {
            Self::ExponentProduct { p } => t
                .iter()
                .zip(p)
                .map(|(&x, &e)| x.powf(e))
                .fold(T::one(), |a, b| a * b),
            Self::ReciprocalProduct { p } => {
                T::one()
                    / t.iter()
                        .zip(p)
                        .map(|(&x, &e)| x.powf(e))
                        .fold(T::one(), |a, b| a * b)
            }
            Self::FractionProduct { mu } => t
                .iter()
                .zip(mu)
                .map(|(&x, &m)| x / (x + m))
                .fold(T::one(), |a, b| a * b),
            Self::ResolventSum {
                beta,
                nodes,
                weights,
            } => nodes
                .iter()
                .zip(weights)
                .fold(*beta, |acc, (&s, &w)| acc + w / (t[0] + s)),
            Self::Custom(c) => (c.value)(t),
        }
    }

    /// `∂f/∂t_i`, or `None` for a custom function without a gradient callback.
    pub fn partial(&self, t: &[T], i: usize) -> Option<T> {
        match self {
            Self::ExponentProduct { p } => Some(p[i] * self.eval(t) / t[i]),
            Self::ReciprocalProduct { p } => Some(-p[i] * self.eval(t) / t[i]),
            Self::FractionProduct { mu } => Some(self.eval(t) * mu[i] / (t[i] * (t[i] + mu[i]))),
            Self::ResolventSum { nodes, weights, .. } => Some(
                -nodes
                    .iter()
                    .zip(weights)
                    .map(|(&s, &w)| w / (t[0] + s).powi(2))
                    .sum::<T>(),
            ),
            Self::Custom(c) => c.gradient.as_ref().map(|g| g(t, i)),
        }
    }

    /// `∂²f/∂t_i∂t_j`, or `None` for a custom function without a Hessian callback.
    pub fn second_partial(&self, t: &[T], i: usize, j: usize) -> Option<T> {
        let two = T::lit(2.0);
        let exponent_like = |q: &[T]| {
            let f = self.eval(t);
            if i == j {
                q[i] * (q[i] - T::one()) * f / (t[i] * t[i])
            } else {
                q[i] * q[j] * f / (t[i] * t[j])
            }
        };
        match self {
            Self::ExponentProduct { p } => Some(exponent_like(p)),
            Self::ReciprocalProduct { p } => {
                let q: Vec<T> = p.iter().map(|&x| -x).collect();
                Some(exponent_like(&q))
            }
            Self::FractionProduct { mu } => {
                let f = self.eval(t);
                Some(if i == j {
                    -two * f * mu[i] / (t[i] * (t[i] + mu[i]).powi(2))
                } else {
                    f * mu[i] * mu[j] / (t[i] * t[j] * (t[i] + mu[i]) * (t[j] + mu[j]))
                })
            }
            Self::ResolventSum { nodes, weights, .. } => Some(
                two * nodes
                    .iter()
                    .zip(weights)
                    .map(|(&s, &w)| w / (t[0] + s).powi(3))
                    .sum::<T>(),
            ),
            Self::Custom(c) => c.hessian.as_ref().map(|h| h(t, i, j)),
        }
    }

    pub fn is_separable(&self) -> bool {
        !matches!(self, Self::Custom(_))
    }

    /// Converts the numeric parameters to another scalar width. Custom functions are not convertible.
    pub fn cast<U: Scalar>(&self) -> Result<FunctionSpec<U>> {
        let c = |v: &[T]| {
            v.iter()
                .map(|x| U::lit(x.to_f64_lossy()))
                .collect::<Vec<U>>()
        };
        Ok(match self {
            Self::ExponentProduct { p } => FunctionSpec::ExponentProduct { p: c(p) },
            Self::FractionProduct { mu } => FunctionSpec::FractionProduct { mu: c(mu) },
            Self::ReciprocalProduct { p } => FunctionSpec::ReciprocalProduct { p: c(p) },
            Self::ResolventSum {
                beta,
                nodes,
                weights,
            } => FunctionSpec::ResolventSum {
                beta: U::lit(beta.to_f64_lossy()),
                nodes: c(nodes),
                weights: c(weights),
            },
            Self::Custom(_) => {
                return Err(Error::InvalidParameter(
                    "custom functions cannot be cast".into(),
                ))
            }
        })
    }
}

/// JSON form, e.g. `{"kind":"exponent_product","p":[0.5,0.5]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpecJson {
    ExponentProduct {
        p: Vec<f64>,
    },
    FractionProduct {
        mu: Vec<f64>,
    },
    ReciprocalProduct {
        p: Vec<f64>,
    },
    ResolventSum {
        beta: f64,
        nodes: Vec<f64>,
        weights: Vec<f64>,
    },
}

impl<T: Scalar> TryFrom<FunctionSpecJson> for FunctionSpec<T> {
    type Error = Error;

    fn try_from(j: FunctionSpecJson) -> Result<Self> {
        let c = |v: Vec<f64>| v.into_iter().map(T::lit).collect::<Vec<T>>();
        match j {
            FunctionSpecJson::ExponentProduct { p } => Self::exponent_product(c(p)),
            FunctionSpecJson::FractionProduct { mu } => Self::fraction_product(c(mu)),
            FunctionSpecJson::ReciprocalProduct { p } => Self::reciprocal_product(c(p)),
            FunctionSpecJson::ResolventSum {
                beta,
                nodes,
                weights,
            } => Self::resolvent_sum(T::lit(beta), c(nodes), c(weights)),
        }
    }
}

impl<T: Scalar> TryFrom<&FunctionSpec<T>> for FunctionSpecJson {
    type Error = Error;

    fn try_from(f: &FunctionSpec<T>) -> Result<Self> {
        let c = |v: &[T]| v.iter().map(|x| x.to_f64_lossy()).collect::<Vec<f64>>();
        Ok(match f {
            FunctionSpec::ExponentProduct { p } => Self::ExponentProduct { p: c(p) },
            FunctionSpec::FractionProduct { mu } => Self::FractionProduct { mu: c(mu) },
            FunctionSpec::ReciprocalProduct { p } => Self::ReciprocalProduct { p: c(p) },
            FunctionSpec::ResolventSum {
                beta,
                nodes,
                weights,
            } => Self::ResolventSum {
                beta: beta.to_f64_lossy(),
                nodes: c(nodes),
                weights: c(weights),
            },
            FunctionSpec::Custom(c) => {
                return Err(Error::InvalidParameter(format!(
                    "custom function '{}' has no JSON form",
                    c.name
                )))
            }
        })
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("'{x}': {e}")))
        })
        .collect()
}

/// Parses the flag syntax: `pow:0.5,0.5`, `frac:1,1`, `recip:1,1`,
/// `resolvent:beta=0;s=1,2;w=1,1`.
impl<T: Scalar> FromStr for FunctionSpec<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected '<kind>:<params>', got '{s}'")))?;
        let json = match head.trim() {
            "pow" => FunctionSpecJson::ExponentProduct {
                p: parse_list(rest)?,
            },
            "frac" => FunctionSpecJson::FractionProduct {
                mu: parse_list(rest)?,
            },
            "recip" => FunctionSpecJson::ReciprocalProduct {
                p: parse_list(rest)?,
            },
            "resolvent" => {
                let (mut beta, mut nodes, mut weights) = (0.0, None, None);
                for part in rest.split(';').filter(|p| !p.trim().is_empty()) {
                    let (key, value) = part
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("expected key=value, got '{part}'")))?;
                    match key.trim() {
                        "beta" => {
                            beta = value
                                .trim()
                                .parse()
                                .map_err(|e| Error::Parse(format!("beta: {e}")))?
                        }
                        "s" => nodes = Some(parse_list(value)?),
                        "w" => weights = Some(parse_list(value)?),
                        other => {
                            return Err(Error::Parse(format!("unknown resolvent key '{other}'")))
                        }
                    }
                }
                let nodes = nodes.ok_or_else(|| Error::Parse("resolvent needs s=...".into()))?;
                let weights = weights.unwrap_or_else(|| vec![1.0; nodes.len()]);
                FunctionSpecJson::ResolventSum {
                    beta,
                    nodes,
                    weights,
                }
            }
            other => return Err(Error::Parse(format!("unknown function kind '{other}'"))),
        };
        json.try_into()
    }
}
