//! Singular values of small dense square matrices by one-sided Jacobi
//! orthogonalization of the columns.

use crate::error::{Error, Result};
use crate::linalg::lu::rank_tolerance;
use crate::linalg::matrix::{DenseMatrix, DenseVector};

const MAX_SWEEPS: usize = 64;
/// Off-diagonality threshold for skipping a rotation; 2^-52 relative keeps
/// singular values at full working accuracy.
const JACOBI_EPS: f64 = 2.0 * f64::EPSILON;

/// Full decomposition m = U · diag(sigma) · Vᵀ with sigma descending.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Left singular vectors; columns with sigma ~ 0 are numerically
    /// meaningless and must be masked by the caller via `rank_tol`.
    pub u: DenseMatrix,
    /// Singular values, descending.
    pub sigma: Vec<f64>,
    /// Right singular vectors as columns.
    pub v: DenseMatrix,
    /// n·ε·σ₁ threshold below which a singular value counts as zero.
    pub rank_tol: f64,
}

impl Svd {
    /// Number of singular values above the rank tolerance.
    pub fn rank(&self) -> usize {
        self.sigma.iter().filter(|&&s| s > self.rank_tol).count()
    }

    /// Right singular vectors spanning the numerical nullspace.
    pub fn nullspace(&self) -> Vec<Vec<f64>> {
        let n = self.v.rows();
        (0..n)
            .filter(|&j| self.sigma[j] <= self.rank_tol)
            .map(|j| self.v.column(j))
            .collect()
    }

    /// Minimum-norm least-squares solution of m·x = rhs.
    pub fn least_squares(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.v.rows();
        assert_eq!(rhs.len(), n);
        let mut x = vec![0.0; n];
        for j in 0..n {
            if self.sigma[j] <= self.rank_tol {
                continue;
            }
            let uj_dot_rhs: f64 = (0..n).map(|i| self.u[(i, j)] * rhs[i]).sum();
            let coeff = uj_dot_rhs / self.sigma[j];
            for i in 0..n {
                x[i] += coeff * self.v[(i, j)];
            }
        }
        x
    }
}

/// One-sided Jacobi on the columns of m. Square input only.
pub fn svd(m: &DenseMatrix) -> Result<Svd> {
    assert!(m.is_square(), "SVD here is defined for square matrices");
    let n = m.rows();
    // a holds the working columns U·Σ; v accumulates the rotations.
    let mut a = m.clone();
    let mut v = DenseMatrix::identity(n);

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..n {
                    let ap = a[(i, p)];
                    let aq = a[(i, q)];
                    alpha += ap * ap;
                    beta += aq * aq;
                    gamma += ap * aq;
                }
                if gamma.abs() <= JACOBI_EPS * (alpha * beta).sqrt() {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                // a rotation at machine-precision angle cannot change the
                // result; skipping it is what terminates the sweep when a
                // column has shrunk to the noise floor of a larger one
                if t.abs() <= f64::EPSILON {
                    continue;
                }
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let ap = a[(i, p)];
                    let aq = a[(i, q)];
                    a[(i, p)] = c * ap - s * aq;
                    a[(i, q)] = s * ap + c * aq;
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
                rotated = true;
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "one-sided Jacobi SVD",
            limit: MAX_SWEEPS,
            best: f64::NAN,
        });
    }

    // column norms are the singular values; sort descending
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)] * a[(i, j)]).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap().then(x.cmp(&y)));

    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let rank_tol = rank_tolerance(n, sigma.first().copied().unwrap_or(0.0));
    let mut u = DenseMatrix::zeros(n, n);
    let mut v_sorted = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let norm = norms[src];
        for i in 0..n {
            u[(i, dst)] = if norm > 0.0 { a[(i, src)] / norm } else { 0.0 };
            v_sorted[(i, dst)] = v[(i, src)];
        }
    }

    Ok(Svd {
        u,
        sigma,
        v: v_sorted,
        rank_tol,
    })
}

/// Singular values sigma_1 >= ... >= sigma_n >= 0 of a square matrix.
pub fn singular_values(m: &DenseMatrix) -> Result<DenseVector> {
    Ok(DenseVector::new(svd(m)?.sigma).expect("singular values are finite"))
}

/// Largest singular value.
pub fn sigma_max(m: &DenseMatrix) -> Result<f64> {
    Ok(svd(m)?.sigma[0])
}

/// Smallest singular value.
pub fn sigma_min(m: &DenseMatrix) -> Result<f64> {
    let s = svd(m)?;
    Ok(*s.sigma.last().unwrap())
}
