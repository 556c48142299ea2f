//! Dense real linear-algebra kernels: factor/solve, determinant signs,
//! singular values and spectral radii. All operations are pure functions
//! of immutable inputs and safe to call from many threads.

mod lu;
mod matrix;
mod spectral;
mod svd;

pub use lu::{det_sign, lu_solve, rank_tolerance, LuFactors};
pub use matrix::{DenseMatrix, DenseVector, DetSign, Sign};
pub use spectral::{eigenvalue_moduli, spectral_radius_general, spectral_radius_nonneg};
pub use svd::{sigma_max, sigma_min, singular_values, svd, Svd};

/// Spectral radius of an entrywise nonnegative matrix, falling back to the
/// general (Schur-based) route when power iteration cycles.
pub fn spectral_radius_nonneg_or_general(m: &DenseMatrix) -> crate::error::Result<f64> {
    match spectral_radius_nonneg(m) {
        Ok(r) => Ok(r),
        Err(crate::error::Error::NoConvergence { .. }) => spectral_radius_general(m),
        Err(e) => Err(e),
    }
}
