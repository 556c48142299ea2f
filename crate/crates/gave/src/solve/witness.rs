//! Construction of a right-hand side realizing non-uniqueness whenever the
//! vertex certificate fails.
//!
//! Zero-determinant vertex s: with x* = s (strictly inside its orthant),
//! b = (A + B·diag(s))·x* makes every x* + t·v for null vectors v a
//! solution on the same branch, so the instance has a solution segment.
//!
//! Sign-flip witness: all vertex determinants are nonzero, so
//! M = (A+B)^-1(A-B) exists and has a strictly negative principal minor.
//! det(M_JJ - λI) changes sign between λ = -(norm+1) and λ = 0, so
//! bisection on the determinant sign locates a real negative eigenvalue λ
//! with eigenvector u; the positive and negative parts of u embedded in J
//! are two distinct complementary solutions of the LCP (M, q) for an
//! explicit q, and b = (A+B)q/2 carries them back to two solutions of the
//! original equation.

use crate::certify::{
    lcp_matrix, pmatrix_certificate, Certificate, ConditionId, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::linalg::{det_sign, svd, DenseMatrix, DenseVector, Sign};

/// Entries with |x_i| at or below this are treated as zero when splitting
/// the eigenvector into positive/negative parts.
const SPLIT_TOL: f64 = 1e-12;

/// Build a right-hand side with more than one solution from a failing
/// vertex certificate. Returns None when the certificate is not a failing
/// vertex certificate.
pub fn construct_nonunique_rhs(
    a: &DenseMatrix,
    b_mat: &DenseMatrix,
    vertex_cert: &Certificate,
) -> Result<Option<DenseVector>> {
    if vertex_cert.condition_id != ConditionId::VertexNs
        || vertex_cert.verdict != Verdict::Fails
    {
        return Ok(None);
    }
    let Some(Witness::SignPattern(s)) = &vertex_cert.witness else {
        return Ok(None);
    };

    let witness_sign = vertex_cert
        .evidence
        .get("witness_det_sign")
        .unwrap_or(f64::NAN);
    if witness_sign == 0.0 {
        // singular vertex: b = (A + B diag(s)) · s
        let m = a.add_mul_diag(b_mat, &s.as_f64());
        return Ok(Some(DenseVector::new(m.mul_vec(&s.as_f64()))?));
    }

    // sign flip: go through the complementarity reduction
    let m = lcp_matrix(a, b_mat)?;
    let n = m.rows();
    let pm = pmatrix_certificate(&m, n);
    let Some(Witness::MinorIndexSet(idx_one_based)) = &pm.witness else {
        // the equivalent P-matrix test must fail when the vertex test
        // failed without a zero determinant; reaching here means a
        // tolerance-level disagreement between the two sweeps
        return Ok(None);
    };
    let support: Vec<usize> = idx_one_based.iter().map(|i| i - 1).collect();
    let sub = m.principal_submatrix(&support);

    let lambda = match det_sign(&sub).sign {
        Sign::Zero => 0.0,
        Sign::Negative => negative_real_eigenvalue(&sub),
        Sign::Positive => {
            return Err(Error::InconsistencyDetected(
                "P-matrix witness minor is positive".into(),
            ))
        }
    };

    // eigenvector of the located real eigenvalue: trailing right singular
    // vector of the shifted block
    let k = support.len();
    let shifted = DenseMatrix::from_fn(k, k, |i, j| {
        sub[(i, j)] - if i == j { lambda } else { 0.0 }
    });
    let dec = svd(&shifted)?;
    let u = dec.v.column(k - 1);

    // embed into full dimension
    let mut x = vec![0.0; n];
    for (pos, &i) in support.iter().enumerate() {
        x[i] = u[pos];
    }
    let mx = m.mul_vec(&x);

    // two complementary solutions z1 = x+, z2 = x- share
    // q = w2 - M z2 with w2 as below
    let z2: Vec<f64> = x.iter().map(|&v| (-v).max(0.0)).collect();
    let w2: Vec<f64> = (0..n)
        .map(|i| {
            if x[i] > SPLIT_TOL {
                -lambda * x[i]
            } else if x[i] < -SPLIT_TOL {
                0.0
            } else {
                (-mx[i]).max(0.0) + 1.0
            }
        })
        .collect();
    let mz2 = m.mul_vec(&z2);
    let q: Vec<f64> = (0..n).map(|i| w2[i] - mz2[i]).collect();

    // b = (A + B) q / 2
    let sum = a.add(b_mat);
    let b = sum.mul_vec(&q).into_iter().map(|v| 0.5 * v).collect();
    Ok(Some(DenseVector::new(b)?))
}

/// Real negative eigenvalue of a square block with negative determinant,
/// located by bisection on the determinant sign of M - λI. The bracket
/// start det(M - λI) > 0 holds for λ below every real eigenvalue.
fn negative_real_eigenvalue(m: &DenseMatrix) -> f64 {
    let k = m.rows();
    let shift = |lambda: f64| {
        DenseMatrix::from_fn(k, k, |i, j| m[(i, j)] - if i == j { lambda } else { 0.0 })
    };
    let mut lo = -(m.norm_inf() + 1.0);
    // widen in the unlikely case the norm bound is not yet positive-side
    for _ in 0..8 {
        if det_sign(&shift(lo)).sign == Sign::Positive {
            break;
        }
        lo *= 2.0;
    }
    let mut hi = 0.0;
    let span = lo.abs();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        match det_sign(&shift(mid)).sign {
            Sign::Zero => return mid,
            Sign::Positive => lo = mid,
            Sign::Negative => hi = mid,
        }
        if hi - lo <= 1e-15 * span {
            break;
        }
    }
    0.5 * (lo + hi)
}
