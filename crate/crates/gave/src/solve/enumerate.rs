//! Exact enumeration over the 2^n sign branches: fixing sign(x) = s turns
//! the equation into the linear system (A + B·diag(s))·x = b, valid
//! whenever the solution satisfies s_i·x_i >= 0. Ground truth at small n.

use crate::certify::{Evidence, LcpInstance};
use crate::error::{Error, Result};
use crate::instance::{GaveInstance, SignVector};
use crate::linalg::{svd, DenseMatrix, DenseVector, LuFactors};
use crate::solve::{
    accept_threshold, residual, MethodId, Solution, SolveReport, SolveVerdict, DEDUP_RADIUS,
    DEFAULT_ACCEPT_TOL, SIGN_TOL,
};

/// Feasible t-interval of the constraints s_i(base_i + t v_i) >= -SIGN_TOL.
/// Returns None when empty; endpoints may be infinite.
fn feasible_interval(s: &SignVector, base: &[f64], v: &[f64]) -> Option<(f64, f64)> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for i in 0..base.len() {
        let c = s.get(i) * base[i];
        let d = s.get(i) * v[i];
        if d.abs() <= 1e-14 {
            if c < -SIGN_TOL {
                return None;
            }
        } else if d > 0.0 {
            lo = lo.max((-SIGN_TOL - c) / d);
        } else {
            hi = hi.min((-SIGN_TOL - c) / d);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

fn sign_feasible(s: &SignVector, x: &[f64]) -> bool {
    x.iter()
        .enumerate()
        .all(|(i, &xi)| s.get(i) * xi >= -SIGN_TOL)
}

struct Accumulator {
    solutions: Vec<Solution>,
    infinite: bool,
    singular_branches: u64,
}

impl Accumulator {
    fn push_dedup(&mut self, x: Vec<f64>, pattern: &SignVector, resid: f64) {
        let dup = self.solutions.iter().any(|sol| {
            sol.x
                .as_slice()
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
                <= DEDUP_RADIUS
        });
        if !dup {
            self.solutions.push(Solution {
                x: DenseVector::new(x).expect("solution entries are finite"),
                pattern: pattern.clone(),
                residual: resid,
            });
        }
    }
}

/// Solve by visiting every sign branch in Gray order. Singular branch
/// matrices are analyzed through the SVD: the least-squares particular
/// solution decides consistency, and the trailing singular vectors are
/// probed for a sign-feasible segment; a segment of positive length makes
/// the verdict `infinite_family` with a representative point listed.
pub fn enumerate_branch_solutions(inst: &GaveInstance, n_cap: usize) -> Result<SolveReport> {
    let rhs = inst.rhs_ref()?;
    let n = inst.n();
    if n > n_cap {
        return Err(Error::CapExceeded { n, cap: n_cap });
    }
    let accept = accept_threshold(DEFAULT_ACCEPT_TOL, rhs);
    let total = 1u64 << n;
    let mut acc = Accumulator {
        solutions: Vec::new(),
        infinite: false,
        singular_branches: 0,
    };

    for k in 0..total {
        let s = SignVector::from_gray_position(k, n);
        let m = inst.a.add_mul_diag(&inst.b_mat, &s.as_f64());
        let lu = LuFactors::factor(&m);
        if !lu.is_singular() {
            let x = lu.solve(rhs.as_slice())?;
            if sign_feasible(&s, &x) {
                let xv = DenseVector::new(x.clone())?;
                let r = residual(inst, &xv);
                if r <= accept {
                    acc.push_dedup(x, &s, r);
                }
            }
            continue;
        }

        acc.singular_branches += 1;
        singular_branch(inst, &m, &s, rhs, accept, &mut acc)?;
    }

    let verdict = if acc.infinite {
        SolveVerdict::InfiniteFamily
    } else {
        match acc.solutions.len() {
            0 => SolveVerdict::None,
            1 => SolveVerdict::Unique,
            _ => SolveVerdict::Multiple,
        }
    };
    Ok(SolveReport {
        method: MethodId::Enumerate,
        verdict,
        solutions: acc.solutions,
        iterations: total,
        evidence: Evidence::new(vec![
            ("branches", total as f64),
            ("singular_branches", acc.singular_branches as f64),
        ]),
        blocked_pattern: None,
    })
}

/// Analyze one singular branch: consistency via the least-squares residual
/// of the particular solution, then sign feasibility along each nullspace
/// direction from the particular solution (and from the branch's own
/// vertex point when that also solves the system).
fn singular_branch(
    inst: &GaveInstance,
    m: &DenseMatrix,
    s: &SignVector,
    rhs: &DenseVector,
    accept: f64,
    acc: &mut Accumulator,
) -> Result<()> {
    let dec = svd(m)?;
    let x_p = dec.least_squares(rhs.as_slice());
    let lstsq_resid = m
        .mul_vec(&x_p)
        .iter()
        .zip(rhs.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if lstsq_resid > accept {
        return Ok(()); // inconsistent branch
    }

    let dirs: Vec<Vec<f64>> = dec
        .nullspace()
        .into_iter()
        .map(|v| {
            let norm = v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            v.into_iter().map(|e| e / norm).collect()
        })
        .collect();

    if dirs.is_empty() {
        // LU called it singular but the SVD sees full rank; treat the
        // least-squares point as an ordinary candidate
        if sign_feasible(s, &x_p) {
            let xv = DenseVector::new(x_p.clone())?;
            let r = residual(inst, &xv);
            if r <= accept {
                acc.push_dedup(x_p, s, r);
            }
        }
        return Ok(());
    }

    let mut bases: Vec<Vec<f64>> = vec![x_p];
    let vertex_point = s.as_f64();
    let vertex_resid = m
        .mul_vec(&vertex_point)
        .iter()
        .zip(rhs.as_slice())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if vertex_resid <= accept {
        bases.push(vertex_point);
    }

    for base in &bases {
        for v in &dirs {
            let Some((lo, hi)) = feasible_interval(s, base, v) else {
                continue;
            };
            if hi - lo > DEDUP_RADIUS {
                // positive-length feasible segment: infinite family
                let t = 0.0f64.max(lo).min(hi);
                let x_rep: Vec<f64> = base.iter().zip(v).map(|(b, vi)| b + t * vi).collect();
                let xv = DenseVector::new(x_rep.clone())?;
                let r = residual(inst, &xv);
                if r <= accept {
                    acc.infinite = true;
                    acc.push_dedup(x_rep, s, r);
                }
            } else {
                let t = 0.5 * (lo + hi);
                let x_c: Vec<f64> = base.iter().zip(v).map(|(b, vi)| b + t * vi).collect();
                let xv = DenseVector::new(x_c.clone())?;
                let r = residual(inst, &xv);
                if r <= accept {
                    acc.push_dedup(x_c, s, r);
                }
            }
        }
    }
    Ok(())
}

/// Enumerate complementary bases of an LCP (M, q): for each support set J,
/// solve M_JJ z_J = -q_J with z = 0 off J, accept when z_J >= -tol and
/// (Mz + q) >= -tol off J. Returns the distinct (z, w) pairs.
pub fn enumerate_lcp_basis_solutions(
    lcp: &LcpInstance,
    n_cap: usize,
) -> Result<Vec<(DenseVector, DenseVector)>> {
    let n = lcp.q.len();
    if n > n_cap {
        return Err(Error::CapExceeded { n, cap: n_cap });
    }
    let tol = DEFAULT_ACCEPT_TOL * (1.0 + lcp.q.norm_inf());
    let mut found: Vec<(DenseVector, DenseVector)> = Vec::new();
    for mask in 0u64..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|&i| (mask >> i) & 1 == 1).collect();
        let mut z = vec![0.0; n];
        if !support.is_empty() {
            let sub = lcp.m.principal_submatrix(&support);
            let neg_q: Vec<f64> = support.iter().map(|&i| -lcp.q[i]).collect();
            let lu = LuFactors::factor(&sub);
            if lu.is_singular() {
                continue; // degenerate basis
            }
            let z_sub = lu.solve(&neg_q)?;
            if z_sub.iter().any(|&v| v < -tol) {
                continue;
            }
            for (pos, &i) in support.iter().enumerate() {
                z[i] = z_sub[pos].max(0.0);
            }
        }
        let w: Vec<f64> = lcp
            .m
            .mul_vec(&z)
            .iter()
            .zip(lcp.q.as_slice())
            .map(|(a, b)| a + b)
            .collect();
        if (0..n).any(|i| !support.contains(&i) && w[i] < -tol) {
            continue;
        }
        let dup = found.iter().any(|(zf, _)| {
            zf.as_slice()
                .iter()
                .zip(&z)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
                <= DEDUP_RADIUS
        });
        if !dup {
            let w_clamped: Vec<f64> = w.into_iter().map(|v| v.max(0.0)).collect();
            found.push((DenseVector::new(z)?, DenseVector::new(w_clamped)?));
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_instance(a: f64, b: f64, rhs: f64) -> GaveInstance {
        GaveInstance::new(
            DenseMatrix::from_rows(&[&[a]]),
            DenseMatrix::from_rows(&[&[b]]),
            Some(DenseVector::from_slice(&[rhs])),
        )
        .unwrap()
    }

    #[test]
    fn unique_scalar_solution() {
        // 2x + |x| = 1: branch + gives x = 1/3; branch - gives x = 1, sign
        // mismatch, rejected
        let report = enumerate_branch_solutions(&scalar_instance(2.0, 1.0, 1.0), 14).unwrap();
        assert_eq!(report.verdict, SolveVerdict::Unique);
        assert_eq!(report.solutions.len(), 1);
        assert!((report.solutions[0].x[0] - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(report.solutions[0].pattern.entries(), &[1]);
    }

    #[test]
    fn infinite_family_on_degenerate_branch() {
        // x + |x| = 0: every x <= 0 solves
        let report = enumerate_branch_solutions(&scalar_instance(1.0, 1.0, 0.0), 14).unwrap();
        assert_eq!(report.verdict, SolveVerdict::InfiniteFamily);
        assert!(!report.solutions.is_empty());
        for sol in &report.solutions {
            assert!(sol.residual <= 2e-8);
        }
    }

    #[test]
    fn no_solution() {
        // x + |x| = -1: branch + gives x = -1/2 (mismatch); branch - is
        // 0·x = -1, inconsistent
        let report = enumerate_branch_solutions(&scalar_instance(1.0, 1.0, -1.0), 14).unwrap();
        assert_eq!(report.verdict, SolveVerdict::None);
        assert!(report.solutions.is_empty());
    }

    #[test]
    fn multiple_solutions_scalar() {
        // x - 2|x| = -1 has x = 1 (branch +) and x = -1/3... check:
        // branch +: (1-2)x = -1 → x = 1, sign ok; branch -: (1+2)x = -1 →
        // x = -1/3, sign ok
        let report = enumerate_branch_solutions(&scalar_instance(1.0, -2.0, -1.0), 14).unwrap();
        assert_eq!(report.verdict, SolveVerdict::Multiple);
        assert_eq!(report.solutions.len(), 2);
    }

    #[test]
    fn zero_entry_solution_not_duplicated() {
        // 1x + 0|x| = 0: x = 0 found by both branches, deduplicated
        let report = enumerate_branch_solutions(&scalar_instance(1.0, 0.0, 0.0), 14).unwrap();
        assert_eq!(report.verdict, SolveVerdict::Unique);
        assert_eq!(report.solutions.len(), 1);
        assert_eq!(report.solutions[0].x[0], 0.0);
    }

    #[test]
    fn cap_exceeded() {
        let inst = GaveInstance::new(
            DenseMatrix::identity(5),
            DenseMatrix::identity(5),
            Some(DenseVector::zeros(5)),
        )
        .unwrap();
        assert!(matches!(
            enumerate_branch_solutions(&inst, 4),
            Err(Error::CapExceeded { n: 5, cap: 4 })
        ));
    }

    #[test]
    fn two_dim_unique_case() {
        // A = 2I, B = I, b = (1,1): x = (1/3, 1/3)
        let inst = GaveInstance::new(
            DenseMatrix::from_diag(&[2.0, 2.0]),
            DenseMatrix::identity(2),
            Some(DenseVector::from_slice(&[1.0, 1.0])),
        )
        .unwrap();
        let report = enumerate_branch_solutions(&inst, 14).unwrap();
        assert_eq!(report.verdict, SolveVerdict::Unique);
        assert!((report.solutions[0].x[0] - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(report.iterations, 4);
    }

    #[test]
    fn lcp_basis_enumeration_scalar() {
        // w = z/3 + 2/3, unique complementary solution z = 0, w = 2/3
        let lcp = LcpInstance {
            m: DenseMatrix::from_rows(&[&[1.0 / 3.0]]),
            q: DenseVector::from_slice(&[2.0 / 3.0]),
        };
        let sols = enumerate_lcp_basis_solutions(&lcp, 14).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].0[0], 0.0);
        assert!((sols[0].1[0] - 2.0 / 3.0).abs() < 1e-15);
    }
}
