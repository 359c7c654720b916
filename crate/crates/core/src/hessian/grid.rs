use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalc::FunctionSpec;
use crate::scalar::Scalar;

/// Per-variable eigenvalue nodes `λ_1(i) < … < λ_{n_i}(i)`; the data set is their product.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSetGrid<T> {
    nodes: Vec<Vec<T>>,
}

/// JSON form `{"nodes": [[...], [...]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridJson {
    pub nodes: Vec<Vec<f64>>,
}

impl<T: Scalar> DataSetGrid<T> {
    pub fn new(nodes: Vec<Vec<T>>) -> Result<Self> {
        if nodes.is_empty() || nodes.iter().any(|n| n.is_empty()) {
            return Err(Error::InvalidParameter(
                "grid needs at least one node per variable".into(),
            ));
        }
        for (i, list) in nodes.iter().enumerate() {
            if list.iter().any(|x| !x.is_finite()) || list.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidParameter(format!(
                    "nodes of variable {i} must be finite and strictly increasing"
                )));
            }
        }
        Ok(Self { nodes })
    }

    /// Sorts and de-duplicates nodes closer than `cluster_tol` before validating.
    pub fn from_unsorted(nodes: Vec<Vec<T>>, cluster_tol: T) -> Result<Self> {
        let cleaned = nodes
            .into_iter()
            .map(|mut list| {
                list.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
                let mut out: Vec<T> = Vec::with_capacity(list.len());
                for x in list {
                    if out.last().map_or(true, |&last| x - last > cluster_tol) {
                        out.push(x);
                    }
                }
                out
            })
            .collect();
        Self::new(cleaned)
    }

    pub fn k(&self) -> usize {
        self.nodes.len()
    }

    pub fn order(&self) -> Vec<usize> {
        self.nodes.iter().map(Vec::len).collect()
    }

    pub fn nodes(&self, variable: usize) -> &[T] {
        &self.nodes[variable]
    }

    /// The data-set point `(λ_{m_1}(1), …, λ_{m_k}(k))` for a zero-based multi-index.
    pub fn point(&self, index: &[usize]) -> Vec<T> {
        index
            .iter()
            .zip(&self.nodes)
            .map(|(&m, list)| list[m])
            .collect()
    }

    pub fn check_index(&self, index: &[usize]) -> Result<()> {
        if index.len() != self.k()
            || index
                .iter()
                .zip(&self.nodes)
                .any(|(&m, list)| m >= list.len())
        {
            return Err(Error::IndexOutOfRange(format!(
                "multi-index {index:?} for order {:?}",
                self.order()
            )));
        }
        Ok(())
    }

    /// All zero-based multi-indices in lexicographic order (last variable fastest).
    pub fn multi_indices(&self) -> Vec<Vec<usize>> {
        let order = self.order();
        let total: usize = order.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0; order.len()];
        for _ in 0..total {
            out.push(idx.clone());
            for v in (0..order.len()).rev() {
                idx[v] += 1;
                if idx[v] < order[v] {
                    break;
                }
                idx[v] = 0;
            }
        }
        out
    }

    /// First data-set point outside the natural domain of `f`, if any.
    pub fn first_outside(&self, f: &FunctionSpec<T>) -> Option<Vec<T>> {
        self.multi_indices()
            .into_iter()
            .map(|m| self.point(&m))
            .find(|p| !f.in_domain(p))
    }

    pub fn to_json(&self) -> GridJson {
        GridJson {
            nodes: self
                .nodes
                .iter()
                .map(|l| l.iter().map(|x| x.to_f64_lossy()).collect())
                .collect(),
        }
    }
}

impl<T: Scalar> TryFrom<GridJson> for DataSetGrid<T> {
    type Error = Error;

    fn try_from(j: GridJson) -> Result<Self> {
        Self::new(
            j.nodes
                .into_iter()
                .map(|l| l.into_iter().map(T::lit).collect())
                .collect(),
        )
    }
}
