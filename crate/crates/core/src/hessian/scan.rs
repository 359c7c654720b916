use rayon::prelude::*;
use serde::Serialize;

use super::engine::generalized_hessian_with;
use super::grid::DataSetGrid;
use crate::config::Tolerances;
use crate::domain::{domain_contains_with, DomainSpec};
use crate::error::Result;
use crate::funcalc::FunctionSpec;
use crate::linalg::eigenvalues;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Psd,
    Nsd,
}

impl std::str::FromStr for ScanMode {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psd" => Ok(Self::Psd),
            "nsd" => Ok(Self::Nsd),
            other => Err(crate::error::Error::Parse(format!(
                "unknown scan mode '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ScanVerdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexResult<T> {
    pub index: Vec<usize>,
    pub point: Vec<T>,
    /// Smallest eigenvalue in PSD mode, largest in NSD mode.
    pub extreme_eigenvalue: T,
    /// Concavity-domain membership of the anchor point (fraction family only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_domain: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain_margin: Option<T>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport<T> {
    pub verdict: ScanVerdict,
    pub mode: ScanMode,
    pub worst_index: Vec<usize>,
    pub worst_eigenvalue: T,
    pub per_index: Vec<IndexResult<T>>,
}

/// Checks every generalized Hessian of the grid for semi-definiteness.
///
/// Mixed grids are scanned as given; for the fraction family each anchor's
/// concavity-domain membership is reported next to its eigenvalue.
pub fn hessian_scan<T: Scalar>(
    f: &FunctionSpec<T>,
    grid: &DataSetGrid<T>,
    mode: ScanMode,
) -> Result<ScanReport<T>> {
    hessian_scan_with(f, grid, mode, &Tolerances::default())
}

pub fn hessian_scan_with<T: Scalar>(
    f: &FunctionSpec<T>,
    grid: &DataSetGrid<T>,
    mode: ScanMode,
    tol: &Tolerances<T>,
) -> Result<ScanReport<T>> {
    let domain = match f {
        FunctionSpec::FractionProduct { mu } => Some(DomainSpec::new(mu.clone())?),
        _ => None,
    };
    let per_index = grid
        .multi_indices()
        .into_par_iter()
        .map(|m| {
            let h = generalized_hessian_with(f, grid, &m, tol)?;
            let ev = eigenvalues(&h.matrix)?;
            let extreme = match mode {
                ScanMode::Psd => ev[0],
                ScanMode::Nsd => *ev.last().expect("non-empty"),
            };
            let point = grid.point(&m);
            let membership = domain
                .as_ref()
                .map(|d| domain_contains_with(d, &point, tol))
                .transpose()?;
            Ok(IndexResult {
                index: m,
                point,
                extreme_eigenvalue: extreme,
                in_domain: membership.map(|x| x.member),
                domain_margin: membership.map(|x| x.margin),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    // Strict comparison keeps the lexicographically first index on ties.
    let worse = |a: T, b: T| match mode {
        ScanMode::Psd => a < b,
        ScanMode::Nsd => a > b,
    };
    let mut worst = 0;
    for (i, r) in per_index.iter().enumerate() {
        if worse(r.extreme_eigenvalue, per_index[worst].extreme_eigenvalue) {
            worst = i;
        }
    }
    let worst_eigenvalue = per_index[worst].extreme_eigenvalue;
    let pass = match mode {
        ScanMode::Psd => worst_eigenvalue >= -tol.psd,
        ScanMode::Nsd => worst_eigenvalue <= tol.psd,
    };
    Ok(ScanReport {
        verdict: if pass {
            ScanVerdict::Pass
        } else {
            ScanVerdict::Fail
        },
        mode,
        worst_index: per_index[worst].index.clone(),
        worst_eigenvalue,
        per_index,
    })
}
