//! Solvers for concrete instances Ax + B|x| = b: an exact sign-branch
//! enumeration oracle for small n, a Picard fixed-point iteration under
//! the contraction condition, and a semismooth Newton iteration over sign
//! patterns.

mod enumerate;
mod newton;
mod picard;
mod witness;

pub use enumerate::{enumerate_branch_solutions, enumerate_lcp_basis_solutions};
pub use newton::newton_solve;
pub use picard::picard_solve;
pub use witness::construct_nonunique_rhs;

use serde::Serialize;

use crate::certify::Evidence;
use crate::instance::{GaveInstance, SignVector};
use crate::linalg::DenseVector;

/// Default residual acceptance tolerance.
pub const DEFAULT_ACCEPT_TOL: f64 = 1e-8;
/// Sign-consistency slack when accepting a branch solution.
pub const SIGN_TOL: f64 = 1e-12;
/// Two solutions within this infinity-norm distance are the same point
/// (a solution with a zero entry is found by two adjacent patterns).
pub const DEDUP_RADIUS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodId {
    Enumerate,
    Picard,
    Newton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveVerdict {
    Unique,
    Multiple,
    None,
    InfiniteFamily,
    Undecided,
}

/// One accepted solution with the sign branch that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub x: DenseVector,
    pub pattern: SignVector,
    pub residual: f64,
}

/// Outcome of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub method: MethodId,
    pub verdict: SolveVerdict,
    /// Accepted solutions; for an infinite family, one representative point.
    pub solutions: Vec<Solution>,
    pub iterations: u64,
    pub evidence: Evidence,
    /// Sign pattern whose branch matrix was singular, when that blocked an
    /// iterative method.
    pub blocked_pattern: Option<SignVector>,
}

impl SolveReport {
    pub(crate) fn new(method: MethodId, verdict: SolveVerdict) -> Self {
        Self {
            method,
            verdict,
            solutions: Vec::new(),
            iterations: 0,
            evidence: Evidence::default(),
            blocked_pattern: None,
        }
    }
}

/// Infinity-norm residual ‖A·x + B·|x| − b‖∞.
pub fn residual(inst: &GaveInstance, x: &DenseVector) -> f64 {
    let rhs = inst
        .rhs
        .as_ref()
        .expect("residual requires a right-hand side");
    assert_eq!(x.len(), inst.n());
    let ax = inst.a.mul_vec(x.as_slice());
    let abs_x: Vec<f64> = x.as_slice().iter().map(|v| v.abs()).collect();
    let babs = inst.b_mat.mul_vec(&abs_x);
    ax.iter()
        .zip(&babs)
        .zip(rhs.as_slice())
        .map(|((a, b), r)| (a + b - r).abs())
        .fold(0.0, f64::max)
}

/// Residual acceptance threshold scaled by the right-hand side.
pub(crate) fn accept_threshold(tol: f64, rhs: &DenseVector) -> f64 {
    tol * (1.0 + rhs.norm_inf())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;
    use crate::rng::CounterRng;

    #[test]
    fn residual_exact_solution_is_zero() {
        // 2x + |x| = 1 at x = 1/3
        let inst = GaveInstance::new(
            DenseMatrix::from_rows(&[&[2.0]]),
            DenseMatrix::identity(1),
            Some(DenseVector::from_slice(&[1.0])),
        )
        .unwrap();
        let r = residual(&inst, &DenseVector::from_slice(&[1.0 / 3.0]));
        assert!(r < 1e-15, "residual {r}");
    }

    #[test]
    fn residual_at_zero_is_rhs_norm() {
        let inst = GaveInstance::new(
            DenseMatrix::from_rows(&[&[4.0, 1.0], &[0.0, 3.0]]),
            DenseMatrix::identity(2),
            Some(DenseVector::from_slice(&[2.0, -5.0])),
        )
        .unwrap();
        let r = residual(&inst, &DenseVector::zeros(2));
        assert_eq!(r, 5.0);
    }

    #[test]
    fn residual_matches_independent_recomputation() {
        // duplicate-evaluation oracle written directly against the entries
        let mut rng = CounterRng::new(23);
        for _ in 0..20 {
            let n = 4;
            let a = DenseMatrix::from_fn(n, n, |_, _| rng.next_symmetric());
            let b = DenseMatrix::from_fn(n, n, |_, _| rng.next_symmetric());
            let rhs = DenseVector::new((0..n).map(|_| rng.next_symmetric()).collect()).unwrap();
            let x = DenseVector::new((0..n).map(|_| rng.next_symmetric()).collect()).unwrap();
            let inst = GaveInstance::new(a.clone(), b.clone(), Some(rhs.clone())).unwrap();
            let got = residual(&inst, &x);
            let mut expect: f64 = 0.0;
            for i in 0..n {
                let mut row = -rhs[i];
                for j in 0..n {
                    row += a[(i, j)] * x[j] + b[(i, j)] * x[j].abs();
                }
                expect = expect.max(row.abs());
            }
            assert!((got - expect).abs() < 1e-14);
        }
    }
}
