//! Sampled falsifier for the box spectral-radius condition
//! rho(A^-1 B D) < 1 over all diagonal D in [-1,1]^n.
//!
//! The universally quantified condition is not decidable by sampling, so
//! this certificate never reports holds: it fails with a witness diagonal
//! when some sampled radius reaches one, and is undecided otherwise. Its
//! holds-side is delegated to the stronger rho(|A^-1 B|) < 1 certificate.

use crate::certify::{CertCost, Certificate, ConditionId, Evidence, Verdict, Witness, STRICT_BAND};
use crate::error::{Error, Result};
use crate::instance::{GaveInstance, SignVector};
use crate::linalg::{spectral_radius_general, LuFactors};
use crate::par::map_chunks;
use crate::rng::symmetric_at;

/// Number of box dimensions up to which all 2^n vertices are included in
/// addition to the random samples.
const VERTEX_DIM_CAP: usize = 12;

struct SampleScan {
    max_rho: f64,
    /// Earliest sample index whose converged radius reached 1 + band.
    first_bad: Option<(u64, f64)>,
    estimate_failures: u64,
}

fn diagonal_at(index: u64, n: usize, vertex_count: u64, seed: u64) -> Vec<f64> {
    if index < vertex_count {
        SignVector::from_gray_position(index, n).as_f64()
    } else {
        let draw = index - vertex_count;
        (0..n as u64)
            .map(|t| symmetric_at(seed, draw * n as u64 + t))
            .collect()
    }
}

/// Draw `samples` diagonals uniformly from [-1,1]^n (plus all sign
/// vertices when n <= 12) and evaluate rho(A^-1 B · diag(d)) on each.
/// Every sample is evaluated (no early exit), so evidence and cost are
/// identical for any thread count. Errors only when A is singular.
pub fn sampled_rho_box(
    inst: &GaveInstance,
    samples: u64,
    seed: u64,
    threads: usize,
) -> Result<Certificate> {
    let n = inst.n();
    let a_lu = LuFactors::factor(&inst.a);
    if a_lu.is_singular() {
        return Err(Error::SingularMatrix {
            context: "A must be nonsingular for the box spectral-radius condition".into(),
        });
    }
    let k_mat = a_lu.solve_matrix(&inst.b_mat)?;

    let vertex_count = if n <= VERTEX_DIM_CAP { 1u64 << n } else { 0 };
    let total = vertex_count + samples;

    let eval = |range: std::ops::Range<u64>| -> SampleScan {
        let mut out = SampleScan {
            max_rho: f64::NEG_INFINITY,
            first_bad: None,
            estimate_failures: 0,
        };
        for j in range {
            let d = diagonal_at(j, n, vertex_count, seed);
            let scaled = k_mat.mul_diag(&d);
            match spectral_radius_general(&scaled) {
                Ok(rho) => {
                    out.max_rho = out.max_rho.max(rho);
                    if rho >= 1.0 + STRICT_BAND && out.first_bad.is_none() {
                        out.first_bad = Some((j, rho));
                    }
                }
                Err(Error::NoConvergence { best, .. }) => {
                    // upper bound only: usable for the max estimate, never
                    // for declaring a failure
                    out.max_rho = out.max_rho.max(best);
                    out.estimate_failures += 1;
                }
                Err(_) => {
                    out.estimate_failures += 1;
                }
            }
        }
        out
    };

    let merged = map_chunks(total, threads, eval, |x, y| SampleScan {
        max_rho: x.max_rho.max(y.max_rho),
        first_bad: match (x.first_bad, y.first_bad) {
            (Some(p), Some(q)) => Some(if p.0 <= q.0 { p } else { q }),
            (p, None) => p,
            (None, q) => q,
        },
        estimate_failures: x.estimate_failures + y.estimate_failures,
    })
    .unwrap_or(SampleScan {
        max_rho: 0.0,
        first_bad: None,
        estimate_failures: 0,
    });

    let cost = CertCost {
        samples: total,
        ..CertCost::default()
    };
    Ok(match merged.first_bad {
        Some((index, rho)) => Certificate {
            condition_id: ConditionId::RhoBoxSampled,
            verdict: Verdict::Fails,
            evidence: Evidence::new(vec![
                ("max_sampled_rho", merged.max_rho),
                ("witness_rho", rho),
                ("witness_index", index as f64),
                ("samples_evaluated", total as f64),
                ("vertex_samples", vertex_count as f64),
            ]),
            witness: Some(Witness::BoxPoint(diagonal_at(index, n, vertex_count, seed))),
            cost,
        },
        None => Certificate {
            condition_id: ConditionId::RhoBoxSampled,
            verdict: Verdict::Undecided,
            evidence: Evidence::new(vec![
                ("max_sampled_rho", merged.max_rho),
                ("samples_evaluated", total as f64),
                ("vertex_samples", vertex_count as f64),
                ("rho_estimate_failures", merged.estimate_failures as f64),
            ]),
            witness: None,
            cost,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{spectral_radius_nonneg_or_general, DenseMatrix};

    #[test]
    fn contractive_pair_stays_undecided() {
        // A = 2I, B = I: rho(0.5 D) <= 0.5 for every diagonal in the box
        let inst = GaveInstance::new(
            DenseMatrix::from_diag(&[2.0, 2.0]),
            DenseMatrix::identity(2),
            None,
        )
        .unwrap();
        let c = sampled_rho_box(&inst, 100, 7, 1).unwrap();
        assert_eq!(c.verdict, Verdict::Undecided);
        let max = c.evidence.get("max_sampled_rho").unwrap();
        assert!(max <= 0.5 + 1e-12, "max sampled rho {max}");
        assert_eq!(c.cost.samples, 100 + 4);
    }

    #[test]
    fn scalar_expansion_fails_at_plus_vertex() {
        // A = [1], B = [2]: the d = +1 vertex gives rho = 2
        let inst = GaveInstance::new(
            DenseMatrix::from_rows(&[&[1.0]]),
            DenseMatrix::from_rows(&[&[2.0]]),
            None,
        )
        .unwrap();
        let c = sampled_rho_box(&inst, 10, 0, 1).unwrap();
        assert_eq!(c.verdict, Verdict::Fails);
        assert_eq!(c.witness, Some(Witness::BoxPoint(vec![1.0])));
        assert!((c.evidence.get("witness_rho").unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn singular_a_errors() {
        let inst = GaveInstance::new(
            DenseMatrix::zeros(2, 2),
            DenseMatrix::identity(2),
            None,
        )
        .unwrap();
        assert!(matches!(
            sampled_rho_box(&inst, 5, 0, 1),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn sampled_radii_dominated_by_entrywise_bound() {
        // every rho(K D) is at most rho(|K|); checked via the max estimate
        let a = DenseMatrix::from_rows(&[
            &[2.5, 0.4, -0.3],
            &[0.1, 3.0, 0.5],
            &[-0.2, 0.3, 2.8],
        ]);
        let b = DenseMatrix::from_rows(&[
            &[0.6, -0.2, 0.1],
            &[0.3, 0.5, -0.4],
            &[0.0, 0.2, 0.7],
        ]);
        let inst = GaveInstance::new(a.clone(), b.clone(), None).unwrap();
        let c = sampled_rho_box(&inst, 200, 11, 1).unwrap();
        let k = LuFactors::factor(&a).solve_matrix(&b).unwrap();
        let bound = spectral_radius_nonneg_or_general(&k.entrywise_abs()).unwrap();
        assert!(
            c.evidence.get("max_sampled_rho").unwrap() <= bound + 1e-6,
            "domination violated"
        );
    }

    #[test]
    fn thread_counts_agree() {
        let inst = GaveInstance::new(
            DenseMatrix::from_rows(&[&[3.0, 0.5], &[-0.4, 2.0]]),
            DenseMatrix::from_rows(&[&[0.5, 0.2], &[0.1, -0.6]]),
            None,
        )
        .unwrap();
        let seq = sampled_rho_box(&inst, 64, 3, 1).unwrap();
        for threads in [2, 5, 8] {
            assert_eq!(sampled_rho_box(&inst, 64, 3, threads).unwrap(), seq);
        }
    }
}
