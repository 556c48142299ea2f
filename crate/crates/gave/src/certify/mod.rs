//! Solvability certificates for Ax + B|x| = b.
//!
//! Each named condition is evaluated into a [`Certificate`]: a verdict
//! (`holds` / `fails` / `undecided`) with numeric evidence and, on failure,
//! a machine-checkable witness. Two certificates are exact
//! (necessary-and-sufficient) but exponential and gated by dimension caps:
//! the sign-vertex determinant sweep ([`vertex_regularity_certificate`])
//! and the principal-minor test on the complementarity reduction
//! ([`pmatrix_certificate`]). The rest are cheap sufficient conditions.

mod lcp;
mod pmatrix;
mod sampled;
mod vertex;

pub use lcp::{lcp_matrix, reduce_to_lcp, LcpInstance};
pub use pmatrix::pmatrix_certificate;
pub use sampled::sampled_rho_box;
pub use vertex::vertex_regularity_certificate;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::instance::{BoxDiagonal, GaveInstance, SignVector};
use crate::linalg::{
    det_sign, sigma_max, sigma_min, spectral_radius_nonneg_or_general, DenseMatrix, LuFactors,
    Sign,
};

/// Verdict band for strict inequalities: "x < t" holds when
/// x <= t - STRICT_BAND, fails when x >= t + STRICT_BAND, and is undecided
/// in between, so SVD-level error cannot flip a verdict silently.
pub const STRICT_BAND: f64 = 1e-10;

/// Default cap on the 2^n sign-vertex sweep.
pub const DEFAULT_N_CAP_VERTEX: usize = 14;
/// Default cap on the 2^n - 1 principal-minor sweep.
pub const DEFAULT_N_CAP_MINOR: usize = 12;

/// The named solvability conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ConditionId {
    /// det(A + B·diag(s)) nonzero with constant sign over all s in {-1,+1}^n.
    #[serde(rename = "VERTEX_NS")]
    VertexNs,
    /// (A+B)^-1(A-B) has all principal minors positive.
    #[serde(rename = "PMATRIX_NS")]
    PmatrixNs,
    /// rho(|A^-1 B|) < 1.
    #[serde(rename = "RHO_ABS")]
    RhoAbs,
    /// Sampled falsifier for rho(A^-1 B D) < 1 over the diagonal box.
    #[serde(rename = "RHO_BOX_SAMPLED")]
    RhoBoxSampled,
    /// sigma_1(A^-1 B) < 1.
    #[serde(rename = "SIGMA1_INVAB")]
    Sigma1InvAb,
    /// sigma_n(B^-1 A) > 1.
    #[serde(rename = "SIGMAN_BINVA")]
    SigmaNBInvA,
    /// sigma_1(B) < sigma_n(A).
    #[serde(rename = "SIGMA_PAIR_37")]
    SigmaPair37,
    /// sigma_1(|B|) < sigma_n(A).
    #[serde(rename = "SIGMA_PAIR_ABS_38")]
    SigmaPairAbs38,
    /// sigma_n(A + I) > 2 (absolute value equation only, B = I).
    #[serde(rename = "AVE_SHIFT")]
    AveShift,
}

impl std::str::FromStr for ConditionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown condition '{s}'; expected one of {}",
                    Self::ALL.map(|c| c.name()).join(", ")
                ))
            })
    }
}

impl ConditionId {
    pub const ALL: [ConditionId; 9] = [
        ConditionId::VertexNs,
        ConditionId::PmatrixNs,
        ConditionId::RhoAbs,
        ConditionId::RhoBoxSampled,
        ConditionId::Sigma1InvAb,
        ConditionId::SigmaNBInvA,
        ConditionId::SigmaPair37,
        ConditionId::SigmaPairAbs38,
        ConditionId::AveShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionId::VertexNs => "VERTEX_NS",
            ConditionId::PmatrixNs => "PMATRIX_NS",
            ConditionId::RhoAbs => "RHO_ABS",
            ConditionId::RhoBoxSampled => "RHO_BOX_SAMPLED",
            ConditionId::Sigma1InvAb => "SIGMA1_INVAB",
            ConditionId::SigmaNBInvA => "SIGMAN_BINVA",
            ConditionId::SigmaPair37 => "SIGMA_PAIR_37",
            ConditionId::SigmaPairAbs38 => "SIGMA_PAIR_ABS_38",
            ConditionId::AveShift => "AVE_SHIFT",
        }
    }

}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

/// Named numeric evidence, serialized as a JSON object in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Evidence(pub Vec<(&'static str, f64)>);

impl Evidence {
    pub fn new(items: Vec<(&'static str, f64)>) -> Self {
        Self(items)
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.0.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }
}

impl Serialize for Evidence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Concrete witness carried by a failing certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Witness {
    /// Sign vertex with zero or flipped determinant.
    SignPattern(SignVector),
    /// 1-based index set of a nonpositive principal minor.
    MinorIndexSet(Vec<usize>),
    /// Sampled diagonal with spectral radius at or above one.
    BoxPoint(Vec<f64>),
}

/// Work counters, reported as the cost a sequential evaluation would incur
/// so reports are identical for any thread count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CertCost {
    pub determinants: u64,
    pub minors: u64,
    pub samples: u64,
}

/// One condition's verdict with evidence and witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub condition_id: ConditionId,
    pub verdict: Verdict,
    pub evidence: Evidence,
    pub witness: Option<Witness>,
    pub cost: CertCost,
}

impl Certificate {
    pub(crate) fn undecided(condition_id: ConditionId, evidence: Evidence) -> Self {
        Self {
            condition_id,
            verdict: Verdict::Undecided,
            evidence,
            witness: None,
            cost: CertCost::default(),
        }
    }
}

/// Verdict for "value < threshold" with the strict band.
pub(crate) fn strict_less(value: f64, threshold: f64) -> Verdict {
    if value <= threshold - STRICT_BAND {
        Verdict::Holds
    } else if value >= threshold + STRICT_BAND {
        Verdict::Fails
    } else {
        Verdict::Undecided
    }
}

/// Verdict for "value > threshold" with the strict band.
pub(crate) fn strict_greater(value: f64, threshold: f64) -> Verdict {
    if value >= threshold + STRICT_BAND {
        Verdict::Holds
    } else if value <= threshold - STRICT_BAND {
        Verdict::Fails
    } else {
        Verdict::Undecided
    }
}

/// The singular-value and spectral-radius certificates, in enum order:
/// RHO_ABS, SIGMA1_INVAB, SIGMAN_BINVA, SIGMA_PAIR_37, SIGMA_PAIR_ABS_38,
/// and AVE_SHIFT when B is the identity. Sub-certificates whose own
/// precondition fails (A or B singular, or a kernel did not converge)
/// report undecided rather than erroring.
pub fn spectral_certificates(inst: &GaveInstance) -> Vec<Certificate> {
    let a = &inst.a;
    let b = &inst.b_mat;
    let mut out = Vec::with_capacity(6);

    let a_lu = LuFactors::factor(a);
    let inv_a_b = if a_lu.is_singular() {
        None
    } else {
        a_lu.solve_matrix(b).ok()
    };

    // RHO_ABS: rho(|A^-1 B|) < 1
    out.push(match &inv_a_b {
        Some(k) => match spectral_radius_nonneg_or_general(&k.entrywise_abs()) {
            Ok(rho) => Certificate {
                condition_id: ConditionId::RhoAbs,
                verdict: strict_less(rho, 1.0),
                evidence: Evidence::new(vec![("rho", rho), ("margin", rho - 1.0)]),
                witness: None,
                cost: CertCost::default(),
            },
            Err(_) => Certificate::undecided(
                ConditionId::RhoAbs,
                Evidence::new(vec![("rho_estimate_failed", 1.0)]),
            ),
        },
        None => Certificate::undecided(
            ConditionId::RhoAbs,
            Evidence::new(vec![("det_sign_a", 0.0)]),
        ),
    });

    // SIGMA1_INVAB: sigma_1(A^-1 B) < 1
    out.push(match &inv_a_b {
        Some(k) => match sigma_max(k) {
            Ok(s1) => Certificate {
                condition_id: ConditionId::Sigma1InvAb,
                verdict: strict_less(s1, 1.0),
                evidence: Evidence::new(vec![("sigma1", s1), ("margin", s1 - 1.0)]),
                witness: None,
                cost: CertCost::default(),
            },
            Err(_) => Certificate::undecided(
                ConditionId::Sigma1InvAb,
                Evidence::new(vec![("svd_failed", 1.0)]),
            ),
        },
        None => Certificate::undecided(
            ConditionId::Sigma1InvAb,
            Evidence::new(vec![("det_sign_a", 0.0)]),
        ),
    });

    // SIGMAN_BINVA: sigma_n(B^-1 A) > 1
    let b_lu = LuFactors::factor(b);
    out.push(if b_lu.is_singular() {
        Certificate::undecided(
            ConditionId::SigmaNBInvA,
            Evidence::new(vec![("det_sign_b", 0.0)]),
        )
    } else {
        match b_lu.solve_matrix(a).and_then(|l| sigma_min(&l)) {
            Ok(sn) => Certificate {
                condition_id: ConditionId::SigmaNBInvA,
                verdict: strict_greater(sn, 1.0),
                evidence: Evidence::new(vec![("sigma_n", sn), ("margin", sn - 1.0)]),
                witness: None,
                cost: CertCost::default(),
            },
            Err(_) => Certificate::undecided(
                ConditionId::SigmaNBInvA,
                Evidence::new(vec![("svd_failed", 1.0)]),
            ),
        }
    });

    // SIGMA_PAIR_37 and SIGMA_PAIR_ABS_38 share sigma_n(A)
    let sigma_n_a = sigma_min(a).ok();
    let sigma1_b = sigma_max(b).ok();
    let sigma1_abs_b = sigma_max(&b.entrywise_abs()).ok();

    out.push(match (sigma1_b, sigma_n_a) {
        (Some(s1b), Some(sna)) => Certificate {
            condition_id: ConditionId::SigmaPair37,
            verdict: strict_less(s1b, sna),
            evidence: Evidence::new(vec![
                ("sigma1_b", s1b),
                ("sigma_n_a", sna),
                ("margin", s1b - sna),
            ]),
            witness: None,
            cost: CertCost::default(),
        },
        _ => Certificate::undecided(
            ConditionId::SigmaPair37,
            Evidence::new(vec![("svd_failed", 1.0)]),
        ),
    });

    out.push(match (sigma1_abs_b, sigma_n_a) {
        (Some(s1b), Some(sna)) => Certificate {
            condition_id: ConditionId::SigmaPairAbs38,
            verdict: strict_less(s1b, sna),
            evidence: Evidence::new(vec![
                ("sigma1_abs_b", s1b),
                ("sigma_n_a", sna),
                ("margin", s1b - sna),
            ]),
            witness: None,
            cost: CertCost::default(),
        },
        _ => Certificate::undecided(
            ConditionId::SigmaPairAbs38,
            Evidence::new(vec![("svd_failed", 1.0)]),
        ),
    });

    // AVE_SHIFT: sigma_n(A + I) > 2, emitted only for B = I
    if inst.is_ave() {
        let shifted = a.add(&DenseMatrix::identity(inst.n()));
        out.push(match sigma_min(&shifted) {
            Ok(sn) => Certificate {
                condition_id: ConditionId::AveShift,
                verdict: strict_greater(sn, 2.0),
                evidence: Evidence::new(vec![
                    ("sigma_n_a_plus_i", sn),
                    ("margin", sn - 2.0),
                ]),
                witness: None,
                cost: CertCost::default(),
            },
            Err(_) => Certificate::undecided(
                ConditionId::AveShift,
                Evidence::new(vec![("svd_failed", 1.0)]),
            ),
        });
    }

    out
}

/// Parameters for the full certificate run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CheckParams {
    pub n_cap_vertex: usize,
    pub n_cap_minor: usize,
    pub samples: u64,
    pub seed: u64,
    pub threads: usize,
}

impl Default for CheckParams {
    fn default() -> Self {
        Self {
            n_cap_vertex: DEFAULT_N_CAP_VERTEX,
            n_cap_minor: DEFAULT_N_CAP_MINOR,
            samples: 1000,
            seed: 0,
            threads: 1,
        }
    }
}

/// Combined verdict of the necessary-and-sufficient certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FinalVerdict {
    Unique,
    NotUnique,
    Undecided,
}

/// All certificates ordered strongest to weakest, plus the final verdict.
#[derive(Debug, Clone, Serialize)]
pub struct HierarchyReport {
    pub final_verdict: FinalVerdict,
    pub certificates: Vec<Certificate>,
}

impl HierarchyReport {
    pub fn certificate(&self, id: ConditionId) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.condition_id == id)
    }
}

/// Report order: descending implication depth (longest chain of known
/// implications down to the exact certificates), ties by enum order.
const STRENGTH_ORDER: [ConditionId; 9] = [
    ConditionId::SigmaPairAbs38,
    ConditionId::SigmaPair37,
    ConditionId::SigmaNBInvA,
    ConditionId::RhoAbs,
    ConditionId::Sigma1InvAb,
    ConditionId::RhoBoxSampled,
    ConditionId::AveShift,
    ConditionId::VertexNs,
    ConditionId::PmatrixNs,
];

/// Known implications (stronger, weaker), transitively closed. A stronger
/// certificate holding while a weaker one fails is an implementation bug.
const IMPLICATIONS: [(ConditionId, ConditionId); 24] = [
    (ConditionId::SigmaPairAbs38, ConditionId::SigmaPair37),
    (ConditionId::SigmaPairAbs38, ConditionId::SigmaNBInvA),
    (ConditionId::SigmaPairAbs38, ConditionId::Sigma1InvAb),
    (ConditionId::SigmaPairAbs38, ConditionId::RhoBoxSampled),
    (ConditionId::SigmaPairAbs38, ConditionId::VertexNs),
    (ConditionId::SigmaPairAbs38, ConditionId::PmatrixNs),
    (ConditionId::SigmaPair37, ConditionId::SigmaNBInvA),
    (ConditionId::SigmaPair37, ConditionId::Sigma1InvAb),
    (ConditionId::SigmaPair37, ConditionId::RhoBoxSampled),
    (ConditionId::SigmaPair37, ConditionId::VertexNs),
    (ConditionId::SigmaPair37, ConditionId::PmatrixNs),
    (ConditionId::SigmaNBInvA, ConditionId::Sigma1InvAb),
    (ConditionId::SigmaNBInvA, ConditionId::RhoBoxSampled),
    (ConditionId::SigmaNBInvA, ConditionId::VertexNs),
    (ConditionId::SigmaNBInvA, ConditionId::PmatrixNs),
    (ConditionId::Sigma1InvAb, ConditionId::RhoBoxSampled),
    (ConditionId::Sigma1InvAb, ConditionId::VertexNs),
    (ConditionId::Sigma1InvAb, ConditionId::PmatrixNs),
    (ConditionId::RhoAbs, ConditionId::RhoBoxSampled),
    (ConditionId::RhoAbs, ConditionId::VertexNs),
    (ConditionId::RhoAbs, ConditionId::PmatrixNs),
    (ConditionId::AveShift, ConditionId::VertexNs),
    (ConditionId::AveShift, ConditionId::PmatrixNs),
    (ConditionId::VertexNs, ConditionId::PmatrixNs),
];

/// Run every certificate, order them strongest to weakest, check the
/// implication chain for internal consistency, and flag the final verdict
/// from the necessary-and-sufficient certificates.
pub fn hierarchy_report(inst: &GaveInstance, params: &CheckParams) -> Result<HierarchyReport> {
    let mut certs: Vec<Certificate> = spectral_certificates(inst);

    certs.push(vertex_regularity_certificate(
        &inst.a,
        &inst.b_mat,
        params.n_cap_vertex,
        params.threads,
    ));

    // P-matrix test on M = (A+B)^-1 (A-B); undefined when A+B is singular
    // (the vertex certificate then already fails at the all-plus vertex).
    certs.push(match lcp_matrix(&inst.a, &inst.b_mat) {
        Ok(m) => pmatrix_certificate(&m, params.n_cap_minor),
        Err(_) => Certificate::undecided(
            ConditionId::PmatrixNs,
            Evidence::new(vec![("det_sign_a_plus_b", 0.0)]),
        ),
    });

    certs.push(
        match sampled_rho_box(inst, params.samples, params.seed, params.threads) {
            Ok(c) => c,
            Err(_) => Certificate::undecided(
                ConditionId::RhoBoxSampled,
                Evidence::new(vec![("det_sign_a", 0.0)]),
            ),
        },
    );

    // order strongest to weakest
    certs.sort_by_key(|c| {
        STRENGTH_ORDER
            .iter()
            .position(|&id| id == c.condition_id)
            .unwrap_or(usize::MAX)
    });

    // internal consistency: no stronger-holds / weaker-fails pair
    let verdict_of = |id: ConditionId| -> Option<Verdict> {
        certs
            .iter()
            .find(|c| c.condition_id == id)
            .map(|c| c.verdict)
    };
    for (stronger, weaker) in IMPLICATIONS {
        if verdict_of(stronger) == Some(Verdict::Holds) && verdict_of(weaker) == Some(Verdict::Fails)
        {
            return Err(Error::InconsistencyDetected(format!(
                "{} holds but implied {} fails",
                stronger.name(),
                weaker.name()
            )));
        }
    }
    // the two exact certificates must agree whenever both are decided
    if let (Some(v), Some(p)) = (
        verdict_of(ConditionId::VertexNs),
        verdict_of(ConditionId::PmatrixNs),
    ) {
        let conflict = matches!(
            (v, p),
            (Verdict::Holds, Verdict::Fails) | (Verdict::Fails, Verdict::Holds)
        );
        if conflict {
            return Err(Error::InconsistencyDetected(
                "VERTEX_NS and PMATRIX_NS are equivalent but disagree".into(),
            ));
        }
    }

    let final_verdict = match verdict_of(ConditionId::VertexNs) {
        Some(Verdict::Holds) => FinalVerdict::Unique,
        Some(Verdict::Fails) => FinalVerdict::NotUnique,
        _ => match verdict_of(ConditionId::PmatrixNs) {
            Some(Verdict::Holds) => FinalVerdict::Unique,
            Some(Verdict::Fails) => FinalVerdict::NotUnique,
            _ => FinalVerdict::Undecided,
        },
    };

    Ok(HierarchyReport {
        final_verdict,
        certificates: certs,
    })
}

/// Evaluate one named condition on an instance (used by the separation
/// search and the CLI's compare command).
pub fn certificate_by_id(inst: &GaveInstance, id: ConditionId, params: &CheckParams) -> Certificate {
    match id {
        ConditionId::VertexNs => vertex_regularity_certificate(
            &inst.a,
            &inst.b_mat,
            params.n_cap_vertex,
            params.threads,
        ),
        ConditionId::PmatrixNs => match lcp_matrix(&inst.a, &inst.b_mat) {
            Ok(m) => pmatrix_certificate(&m, params.n_cap_minor),
            Err(_) => Certificate::undecided(
                ConditionId::PmatrixNs,
                Evidence::new(vec![("det_sign_a_plus_b", 0.0)]),
            ),
        },
        ConditionId::RhoBoxSampled => {
            match sampled_rho_box(inst, params.samples, params.seed, params.threads) {
                Ok(c) => c,
                Err(_) => Certificate::undecided(
                    ConditionId::RhoBoxSampled,
                    Evidence::new(vec![("det_sign_a", 0.0)]),
                ),
            }
        }
        ConditionId::AveShift if !inst.is_ave() => Certificate::undecided(
            ConditionId::AveShift,
            Evidence::new(vec![("is_ave", 0.0)]),
        ),
        other => spectral_certificates(inst)
            .into_iter()
            .find(|c| c.condition_id == other)
            .expect("spectral certificate present"),
    }
}

/// True when (stronger ⇒ weaker) is a known implication, or the pair can
/// never separate for a structural reason (RHO_BOX_SAMPLED never holds).
pub fn known_implication(stronger: ConditionId, weaker: ConditionId) -> bool {
    stronger == ConditionId::RhoBoxSampled
        || IMPLICATIONS
            .iter()
            .any(|&(s, w)| s == stronger && w == weaker)
}

/// Determinant sign of A + B·diag(s): the quantity both exact certificates
/// are built from.
pub fn vertex_det_sign(a: &DenseMatrix, b: &DenseMatrix, s: &SignVector) -> crate::linalg::DetSign {
    det_sign(&a.add_mul_diag(b, &s.as_f64()))
}

/// Determinant sign of A + B·diag(d) at an arbitrary point of the box.
pub fn box_det_sign(a: &DenseMatrix, b: &DenseMatrix, d: &BoxDiagonal) -> crate::linalg::DetSign {
    det_sign(&a.add_mul_diag(b, &d.entries))
}

pub(crate) fn sign_value(s: Sign) -> f64 {
    s.as_i32() as f64
}
