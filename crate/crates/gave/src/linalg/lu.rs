//! LU factorization with row partial pivoting; linear solves and
//! determinant signs are both read off the same elimination.

use crate::error::{Error, Result};
use crate::linalg::matrix::{DenseMatrix, DenseVector, DetSign, Sign};

/// Rank tolerance: pivots with magnitude at or below n·ε·max|entry| are
/// treated as zero. Scale-invariant and standard.
pub fn rank_tolerance(n: usize, max_abs_entry: f64) -> f64 {
    n as f64 * f64::EPSILON * max_abs_entry
}

/// Packed LU factors of a square matrix, PA = LU.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    /// L (unit diagonal, below) and U (on and above) packed together.
    lu: Vec<f64>,
    /// perm[i] = source row of eliminated row i.
    perm: Vec<usize>,
    odd_swaps: bool,
    rank_tol: f64,
    /// First elimination step whose best pivot fell inside the tolerance.
    singular_at: Option<usize>,
}

impl LuFactors {
    /// Factor with partial pivoting. Always succeeds; singularity is a
    /// property of the factors, not an error here, so `det_sign` can report
    /// zero as a valid result.
    pub fn factor(m: &DenseMatrix) -> Self {
        assert!(m.is_square(), "LU factorization requires a square matrix");
        let n = m.rows();
        let mut lu = m.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd_swaps = false;
        let rank_tol = rank_tolerance(n, m.max_abs_entry());
        let mut singular_at = None;

        for k in 0..n {
            // choose pivot row
            let mut p = k;
            let mut best = lu[k * n + k].abs();
            for i in (k + 1)..n {
                let v = lu[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= rank_tol {
                singular_at = Some(k);
                break;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                odd_swaps = !odd_swaps;
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in (k + 1)..n {
                    lu[i * n + j] -= factor * lu[k * n + j];
                }
            }
        }

        Self {
            n,
            lu,
            perm,
            odd_swaps,
            rank_tol,
            singular_at,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular_at.is_some()
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    /// Determinant sign and log-magnitude from pivots and swap parity.
    pub fn det_sign(&self) -> DetSign {
        if self.singular_at.is_some() {
            return DetSign::zero();
        }
        let mut sign = if self.odd_swaps {
            Sign::Negative
        } else {
            Sign::Positive
        };
        let mut log_mag = 0.0;
        for k in 0..self.n {
            let pivot = self.lu[k * self.n + k];
            if pivot < 0.0 {
                sign = sign.flip();
            }
            log_mag += pivot.abs().ln();
        }
        DetSign {
            sign,
            log_magnitude: log_mag,
        }
    }

    /// Solve A x = rhs through the factors.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if let Some(step) = self.singular_at {
            return Err(Error::SingularMatrix {
                context: format!(
                    "pivot magnitude at elimination step {step} at or below rank tolerance {:.3e}",
                    self.rank_tol
                ),
            });
        }
        assert_eq!(rhs.len(), self.n, "rhs length mismatch");
        let n = self.n;
        // forward substitution on permuted rhs (L has unit diagonal)
        let mut x: Vec<f64> = self.perm.iter().map(|&src| rhs[src]).collect();
        for i in 1..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        // back substitution
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        Ok(x)
    }

    /// Solve A X = B column by column.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        assert_eq!(b.rows(), self.n);
        let mut out = DenseMatrix::zeros(self.n, b.cols());
        for j in 0..b.cols() {
            let col = self.solve(&b.column(j))?;
            for i in 0..self.n {
                out[(i, j)] = col[i];
            }
        }
        Ok(out)
    }
}

/// Solve m·x = rhs with row partial pivoting.
pub fn lu_solve(m: &DenseMatrix, rhs: &DenseVector) -> Result<DenseVector> {
    assert_eq!(
        m.rows(),
        rhs.len(),
        "matrix and right-hand side dimensions must match"
    );
    let x = LuFactors::factor(m).solve(rhs.as_slice())?;
    DenseVector::new(x)
}

/// Determinant sign of a square matrix via pivoted elimination.
pub fn det_sign(m: &DenseMatrix) -> DetSign {
    LuFactors::factor(m).det_sign()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    /// Cofactor-expansion determinant, the independent oracle for n <= 4.
    fn det_cofactor(m: &DenseMatrix) -> f64 {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)];
        }
        let mut det = 0.0;
        for j in 0..n {
            let minor = DenseMatrix::from_fn(n - 1, n - 1, |r, c| {
                m[(r + 1, if c < j { c } else { c + 1 })]
            });
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            det += sign * m[(0, j)] * det_cofactor(&minor);
        }
        det
    }

    #[test]
    fn solve_identity() {
        let m = DenseMatrix::identity(3);
        let rhs = DenseVector::from_slice(&[1.0, 2.0, 3.0]);
        let x = lu_solve(&m, &rhs).unwrap();
        assert_eq!(x.as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn solve_diagonal() {
        let m = DenseMatrix::from_diag(&[2.0, 1.0]);
        let rhs = DenseVector::from_slice(&[1.0, 1.0]);
        let x = lu_solve(&m, &rhs).unwrap();
        assert_eq!(x.as_slice(), &[0.5, 1.0]);
    }

    #[test]
    fn solve_random_well_conditioned_residual() {
        // residual-substitution oracle: plug x back in
        let mut rng = CounterRng::new(7);
        for _ in 0..20 {
            let n = 5;
            let mut m = DenseMatrix::from_fn(n, n, |_, _| rng.next_symmetric());
            for i in 0..n {
                m[(i, i)] += 4.0; // keep it well-conditioned
            }
            let rhs = DenseVector::new((0..n).map(|_| rng.next_symmetric()).collect()).unwrap();
            let x = lu_solve(&m, &rhs).unwrap();
            let mut resid: f64 = 0.0;
            for i in 0..n {
                let ax: f64 = m.row(i).iter().zip(x.as_slice()).map(|(a, b)| a * b).sum();
                resid = resid.max((ax - rhs[i]).abs());
            }
            assert!(resid <= 1e-10, "residual {resid} too large");
        }
    }

    #[test]
    fn solve_singular_errors() {
        let m = DenseMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        let rhs = DenseVector::from_slice(&[1.0, 1.0]);
        assert!(matches!(
            lu_solve(&m, &rhs),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn det_sign_identity_positive() {
        for n in 1..6 {
            let d = det_sign(&DenseMatrix::identity(n));
            assert_eq!(d.sign, Sign::Positive);
            assert!(d.log_magnitude.abs() < 1e-12);
        }
    }

    #[test]
    fn det_sign_one_transposition_negative() {
        let m = DenseMatrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(det_sign(&m).sign, Sign::Negative);
    }

    #[test]
    fn det_sign_zero_for_singular() {
        let m = DenseMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(det_sign(&m).is_zero());
    }

    #[test]
    fn det_sign_matches_cofactor_oracle() {
        let mut rng = CounterRng::new(11);
        for _ in 0..200 {
            let m = DenseMatrix::from_fn(4, 4, |_, _| rng.next_symmetric());
            let oracle = det_cofactor(&m);
            let got = det_sign(&m);
            if oracle.abs() > 1e-8 {
                assert_eq!(got.sign.as_i32(), if oracle > 0.0 { 1 } else { -1 });
                assert!(
                    (got.log_magnitude - oracle.abs().ln()).abs() < 1e-6,
                    "log magnitude {} vs oracle {}",
                    got.log_magnitude,
                    oracle.abs().ln()
                );
            }
        }
    }

    #[test]
    fn det_sign_parity_flips_under_row_swap() {
        let mut rng = CounterRng::new(13);
        for _ in 0..50 {
            let n = 4;
            let m = DenseMatrix::from_fn(n, n, |_, _| rng.next_symmetric());
            let mut swapped = m.clone();
            for j in 0..n {
                let t = swapped[(0, j)];
                swapped[(0, j)] = swapped[(1, j)];
                swapped[(1, j)] = t;
            }
            let a = det_sign(&m);
            let b = det_sign(&swapped);
            assert_eq!(a.sign, b.sign.flip());
        }
    }
}
