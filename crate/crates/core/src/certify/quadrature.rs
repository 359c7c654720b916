//! Positive-weight quadrature for integrals over `[0, ∞)`.

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[−1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Result<Vec<(f64, f64)>> {
    if n == 0 {
        return Err(Error::InvalidParameter("at least one node required".into()));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess for the i-th root, largest first.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let step = pn / dp;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    Ok(out)
}

/// Nodes `u_j` and weights `w_j` with `Σ w_j g(u_j) ≈ ∫_0^∞ g(u) du`: substitution
/// `u = s / (1 − s)` and composite Gauss–Legendre on `s ∈ [0, 1]`.
pub fn half_line_quadrature(panels: usize, points: usize) -> Result<Vec<(f64, f64)>> {
    if panels == 0 {
        return Err(Error::InvalidParameter(
            "at least one panel required".into(),
        ));
    }
    let base = gauss_legendre(points)?;
    let h = 1.0 / panels as f64;
    let mut out = Vec::with_capacity(panels * points);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for &(x, w) in &base {
            let s = mid + 0.5 * h * x;
            let jac = 1.0 / ((1.0 - s) * (1.0 - s));
            out.push((s / (1.0 - s), 0.5 * h * w * jac));
        }
    }
    Ok(out)
}

/// The default 20-node rule (4 panels × 5 points).
pub fn default_quadrature() -> Vec<(f64, f64)> {
    half_line_quadrature(4, 5).expect("valid sizes")
}
