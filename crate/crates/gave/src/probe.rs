//! Seeded random instances, counterexample search between conditions, and
//! batch cross-checks of the certificates against the enumeration oracle.
//!
//! Every output is a pure function of the seeds and specs: instance i of a
//! run uses the sub-stream `derive(seed, i)`, and right-hand side j for
//! instance i uses `derive(derive(seed, i), RHS_SALT + j)`.

use serde::Serialize;

use crate::certify::{
    certificate_by_id, hierarchy_report, known_implication, Certificate, CheckParams, ConditionId,
    FinalVerdict, Verdict,
};
use crate::error::{Error, Result};
use crate::instance::GaveInstance;
use crate::linalg::{sigma_max, DenseMatrix, DenseVector, LuFactors};
use crate::rng::{derive, gaussian_at, symmetric_at};
use crate::solve::{construct_nonunique_rhs, enumerate_branch_solutions, SolveVerdict};

/// Salt separating right-hand-side streams from instance streams.
const RHS_SALT: u64 = 0xB000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    /// Independent standard normal entries for A and B.
    Gaussian,
    /// A diagonally dominant (diagonal = 1 + off-diagonal row sum),
    /// B uniform scaled by 1/n.
    DiagonalDominant,
    /// Gaussian pair with B rescaled to hit a target sigma_1(A^-1 B).
    ScaledContraction,
    /// Diagonal A and B with uniform entries in [-1, 1).
    Diagonal,
}

impl std::str::FromStr for Ensemble {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Ensemble::Gaussian),
            "diagonal-dominant" => Ok(Ensemble::DiagonalDominant),
            "scaled-contraction" => Ok(Ensemble::ScaledContraction),
            "diagonal" => Ok(Ensemble::Diagonal),
            _ => Err(Error::Config(format!(
                "unknown ensemble '{s}'; expected gaussian, diagonal-dominant, \
                 scaled-contraction or diagonal"
            ))),
        }
    }
}

/// Deterministic description of one random instance family.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnsembleSpec {
    pub n: usize,
    pub ensemble: Ensemble,
    /// Target sigma_1(A^-1 B) for the scaled-contraction ensemble.
    pub target: Option<f64>,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("ensemble dimension must be at least 1".into()));
        }
        if let Some(t) = self.target {
            if !(t > 0.0) {
                return Err(Error::Config(format!("target must be positive, got {t}")));
            }
        }
        if self.ensemble == Ensemble::ScaledContraction && self.target.is_none() {
            return Err(Error::Config(
                "scaled-contraction ensemble requires a target".into(),
            ));
        }
        Ok(())
    }

    fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

fn gaussian_matrix(seed: u64, n: usize, offset: u64) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        gaussian_at(seed, offset + (i * n + j) as u64)
    })
}

fn uniform_matrix(seed: u64, n: usize, offset: u64) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        symmetric_at(seed, offset + (i * n + j) as u64)
    })
}

/// Draw one instance. Deterministic in (spec, seed): attempt r uses the
/// sub-stream `derive(seed, r)`, where A consumes entry indices 0..n^2 and
/// B consumes n^2..2n^2 (Gaussian entries consume index pairs). Only the
/// scaled-contraction ensemble retries, when A comes out singular or B is
/// zero; 100 failed attempts raise `SingularMatrix`.
pub fn random_instance(spec: &EnsembleSpec) -> Result<GaveInstance> {
    spec.validate()?;
    let n = spec.n;
    match spec.ensemble {
        Ensemble::Gaussian => {
            let s = derive(spec.seed, 0);
            let a = gaussian_matrix(s, n, 0);
            let b = gaussian_matrix(s, n, (n * n) as u64);
            GaveInstance::new(a, b, None)
        }
        Ensemble::DiagonalDominant => {
            let s = derive(spec.seed, 0);
            let mut a = uniform_matrix(s, n, 0);
            for i in 0..n {
                let off_sum: f64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| a[(i, j)].abs())
                    .sum();
                a[(i, i)] = 1.0 + off_sum;
            }
            let b = uniform_matrix(s, n, (n * n) as u64).scale(1.0 / n as f64);
            GaveInstance::new(a, b, None)
        }
        Ensemble::Diagonal => {
            let s = derive(spec.seed, 0);
            let a = DenseMatrix::from_diag(
                &(0..n)
                    .map(|i| symmetric_at(s, i as u64))
                    .collect::<Vec<_>>(),
            );
            let b = DenseMatrix::from_diag(
                &(0..n)
                    .map(|i| symmetric_at(s, (n + i) as u64))
                    .collect::<Vec<_>>(),
            );
            GaveInstance::new(a, b, None)
        }
        Ensemble::ScaledContraction => {
            let target = spec.target.expect("validated above");
            for attempt in 0..100 {
                let s = derive(spec.seed, attempt);
                let a = gaussian_matrix(s, n, 0);
                let b = gaussian_matrix(s, n, (n * n) as u64);
                let lu = LuFactors::factor(&a);
                if lu.is_singular() {
                    continue;
                }
                let k = lu.solve_matrix(&b)?;
                let s1 = sigma_max(&k)?;
                if s1 <= f64::MIN_POSITIVE {
                    continue;
                }
                return GaveInstance::new(a, b.scale(target / s1), None);
            }
            Err(Error::SingularMatrix {
                context: "100 consecutive scaled-contraction draws gave singular A".into(),
            })
        }
    }
}

/// Right-hand side j for instance stream `instance_seed`, entries uniform
/// in [-1, 1).
pub fn random_rhs(instance_seed: u64, j: u64, n: usize) -> DenseVector {
    let s = derive(instance_seed, RHS_SALT + j);
    DenseVector::new((0..n as u64).map(|t| symmetric_at(s, t)).collect())
        .expect("uniform draws are finite")
}

/// Search request: the first instance where `must_hold` holds and
/// `must_fail` fails.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeparationQuery {
    pub must_hold: ConditionId,
    pub must_fail: ConditionId,
    pub budget: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationWitness {
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub hold_certificate: Certificate,
    pub fail_certificate: Certificate,
    /// 0-based draw index that produced the witness.
    pub draw_index: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationOutcome {
    /// Set when the pair contradicts a known implication (or `must_hold`
    /// can never hold); the search still runs and must come back empty.
    pub impossible_pair: bool,
    pub draws_used: u64,
    pub witness: Option<SeparationWitness>,
}

/// Scan up to `budget` seeded draws for an instance separating the two
/// conditions. The witness is the smallest draw index that satisfies the
/// query.
pub fn find_separating_instance(
    query: &SeparationQuery,
    spec: &EnsembleSpec,
    params: &CheckParams,
) -> Result<SeparationOutcome> {
    if query.must_hold == query.must_fail {
        return Err(Error::Config(
            "must_hold and must_fail name the same condition".into(),
        ));
    }
    if query.budget == 0 {
        return Err(Error::Config("budget must be at least 1".into()));
    }
    spec.validate()?;
    let impossible_pair = known_implication(query.must_hold, query.must_fail);

    for i in 0..query.budget {
        let inst = random_instance(&spec.with_seed(derive(spec.seed, i)))?;
        let draw_params = CheckParams {
            seed: derive(query.seed, i),
            ..*params
        };
        let hold = certificate_by_id(&inst, query.must_hold, &draw_params);
        if hold.verdict != Verdict::Holds {
            continue;
        }
        let fail = certificate_by_id(&inst, query.must_fail, &draw_params);
        if fail.verdict == Verdict::Fails {
            return Ok(SeparationOutcome {
                impossible_pair,
                draws_used: i + 1,
                witness: Some(SeparationWitness {
                    a: inst.a,
                    b: inst.b_mat,
                    hold_certificate: hold,
                    fail_certificate: fail,
                    draw_index: i,
                }),
            });
        }
    }
    Ok(SeparationOutcome {
        impossible_pair,
        draws_used: query.budget,
        witness: None,
    })
}

/// Batch comparison of the certificates' final verdict against the
/// enumeration oracle.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct CrosscheckSummary {
    pub instances: u64,
    pub rhs_per_instance: u64,
    /// Instances where certificate and oracle agree (unique verdicts with
    /// every oracle run unique; not-unique verdicts with a realized witness).
    pub agreements: u64,
    /// Unique verdicts contradicted by the oracle; must stay zero.
    pub disagreements: u64,
    pub unique_instances: u64,
    pub not_unique_instances: u64,
    /// Not-unique verdicts realized by a random right-hand side.
    pub witnesses_by_sampling: u64,
    /// Not-unique verdicts realized only by the targeted construction.
    pub witnesses_by_construction: u64,
    /// Not-unique verdicts with no witnessing right-hand side found.
    pub unrealized_not_unique: u64,
}

/// For each seeded instance, compare the certificates' final verdict with
/// the enumeration oracle over random right-hand sides; for not-unique
/// verdicts, exhibit a witnessing b (by sampling or targeted construction).
pub fn uniqueness_crosscheck(
    spec: &EnsembleSpec,
    instances: u64,
    rhs_per_instance: u64,
    params: &CheckParams,
) -> Result<CrosscheckSummary> {
    spec.validate()?;
    if spec.n > params.n_cap_vertex {
        return Err(Error::CapExceeded {
            n: spec.n,
            cap: params.n_cap_vertex,
        });
    }
    let mut summary = CrosscheckSummary {
        instances,
        rhs_per_instance,
        ..CrosscheckSummary::default()
    };
    for i in 0..instances {
        let instance_seed = derive(spec.seed, i);
        let inst = random_instance(&spec.with_seed(instance_seed))?;
        crosscheck_one(&inst, instance_seed, rhs_per_instance, params, &mut summary)?;
    }
    Ok(summary)
}

/// Cross-check a single instance (also used for hand-built degenerate
/// cases in the test suites).
pub fn crosscheck_one(
    inst: &GaveInstance,
    instance_seed: u64,
    rhs_per_instance: u64,
    params: &CheckParams,
    summary: &mut CrosscheckSummary,
) -> Result<()> {
    let report = hierarchy_report(inst, params)?;
    let n = inst.n();
    match report.final_verdict {
        FinalVerdict::Unique => {
            summary.unique_instances += 1;
            let mut contradicted = false;
            for j in 0..rhs_per_instance {
                let rhs = random_rhs(instance_seed, j, n);
                let oracle = enumerate_branch_solutions(&inst.with_rhs(rhs)?, params.n_cap_vertex)?;
                if oracle.verdict != SolveVerdict::Unique {
                    contradicted = true;
                    break;
                }
            }
            if contradicted {
                summary.disagreements += 1;
            } else {
                summary.agreements += 1;
            }
        }
        FinalVerdict::NotUnique => {
            summary.not_unique_instances += 1;
            let mut realized = false;
            for j in 0..rhs_per_instance {
                let rhs = random_rhs(instance_seed, j, n);
                let oracle = enumerate_branch_solutions(&inst.with_rhs(rhs)?, params.n_cap_vertex)?;
                if oracle.verdict != SolveVerdict::Unique {
                    realized = true;
                    summary.witnesses_by_sampling += 1;
                    break;
                }
            }
            if !realized {
                // targeted construction from the vertex witness
                let vertex = report
                    .certificate(ConditionId::VertexNs)
                    .expect("vertex certificate present");
                if let Some(rhs) = construct_nonunique_rhs(&inst.a, &inst.b_mat, vertex)? {
                    let oracle =
                        enumerate_branch_solutions(&inst.with_rhs(rhs)?, params.n_cap_vertex)?;
                    if oracle.verdict != SolveVerdict::Unique {
                        realized = true;
                        summary.witnesses_by_construction += 1;
                    }
                }
            }
            if realized {
                summary.agreements += 1;
            } else {
                summary.unrealized_not_unique += 1;
            }
        }
        FinalVerdict::Undecided => {
            // n is capped above, so the exact certificates always decide
            unreachable!("final verdict undecided below the dimension caps")
        }
    }
    Ok(())
}
