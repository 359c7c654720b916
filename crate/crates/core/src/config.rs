//! Centralized numerical tolerances.

use crate::scalar::Scalar;

/// Every tolerance referenced by the checks, overridable per call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Maximum entrywise deviation from Hermitian symmetry accepted on validated input.
    pub hermiticity: T,
    /// A Hermitian matrix is PSD iff its smallest eigenvalue is at least `-psd`.
    pub psd: T,
    /// Frobenius reconstruction tolerance of spectral decompositions.
    pub reconstruction: T,
    /// Eigenvalues closer than this share one spectral projection.
    pub cluster: T,
    /// Divided differences switch to derivatives when nodes are this close.
    pub divided_difference: T,
    /// Jacobi stops when off-diagonal Frobenius mass is at most this times `||M||_F`.
    pub jacobi_relative: T,
    pub jacobi_max_sweeps: usize,
}

impl<T: Scalar> Tolerances<T> {
    /// Floors a tolerance at a small multiple of machine epsilon so `f32` stays usable.
    fn floored(x: f64, ulps: f64) -> T {
        let floor = T::epsilon() * T::lit(ulps);
        T::lit(x).max(floor)
    }

    pub fn with_psd(mut self, psd: T) -> Self {
        self.psd = psd;
        self
    }

    pub fn with_cluster(mut self, cluster: T) -> Self {
        self.cluster = cluster;
        self
    }
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            hermiticity: Self::floored(1e-12, 64.0),
            psd: Self::floored(1e-10, 256.0),
            reconstruction: Self::floored(1e-9, 1024.0),
            cluster: Self::floored(1e-8, 1024.0),
            divided_difference: Self::floored(1e-7, 4096.0),
            jacobi_relative: Self::floored(1e-13, 16.0),
            jacobi_max_sweeps: 100,
        }
    }
}
