//! Reduction of Ax + B|x| = b to a linear complementarity problem.
//!
//! With A + B nonsingular the substitution w = |x| + x, z = |x| - x turns
//! the equation into w = Mz + q with M = (A+B)^-1(A-B) and
//! q = 2(A+B)^-1 b; solutions map back through x = (w - z)/2.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::GaveInstance;
use crate::linalg::{DenseMatrix, DenseVector, LuFactors};

/// The pair (M, q); z = |x| - x, w = |x| + x, x = (w - z)/2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LcpInstance {
    pub m: DenseMatrix,
    pub q: DenseVector,
}

/// M = (A+B)^-1 (A-B), computed column by column through one LU
/// factorization of A + B.
pub fn lcp_matrix(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let sum = a.add(b);
    let lu = LuFactors::factor(&sum);
    if lu.is_singular() {
        return Err(Error::SingularSum);
    }
    lu.solve_matrix(&a.sub(b))
}

/// Full reduction including q = 2(A+B)^-1 b; requires a right-hand side.
pub fn reduce_to_lcp(inst: &GaveInstance) -> Result<LcpInstance> {
    let rhs = inst.rhs_ref()?;
    let sum = inst.a.add(&inst.b_mat);
    let lu = LuFactors::factor(&sum);
    if lu.is_singular() {
        return Err(Error::SingularSum);
    }
    let m = lu.solve_matrix(&inst.a.sub(&inst.b_mat))?;
    let half_q = lu.solve(rhs.as_slice())?;
    let q = DenseVector::new(half_q.into_iter().map(|v| 2.0 * v).collect())?;
    Ok(LcpInstance { m, q })
}
