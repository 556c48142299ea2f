//! Command-line front end: `check`, `solve`, `compare` and `fuzz`
//! subcommands over Matrix Market files, each emitting one deterministic
//! JSON document on stdout. Floating values are serialized with 17
//! significant digits; struct fields keep declaration order; the wall-time
//! field is the only part of a report that varies between identical runs.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::certify::{hierarchy_report, CheckParams, ConditionId, STRICT_BAND};
use crate::error::{Error, Result};
use crate::instance::GaveInstance;
use crate::io::{load_matrix_market, load_vector_market};
use crate::linalg::DenseMatrix;
use crate::probe::{
    find_separating_instance, uniqueness_crosscheck, Ensemble, EnsembleSpec, SeparationQuery,
};
use crate::solve::{enumerate_branch_solutions, newton_solve, picard_solve};

/// Certify and solve generalized absolute value equations Ax + B|x| = b.
#[derive(Debug, Parser)]
#[command(name = "gave", version, disable_help_subcommand = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every solvability certificate and report the final verdict.
    Check(CheckArgs),
    /// Solve one instance by enumeration, Picard or Newton iteration.
    Solve(SolveArgs),
    /// Search for an instance separating two conditions.
    Compare(CompareArgs),
    /// Cross-check certificates against the enumeration oracle.
    Fuzz(FuzzArgs),
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Matrix A in Matrix Market format.
    #[arg(long = "A", value_name = "PATH")]
    pub a: PathBuf,
    /// Matrix B in Matrix Market format.
    #[arg(long = "B", value_name = "PATH", required_unless_present = "ave", conflicts_with = "ave")]
    pub b: Option<PathBuf>,
    /// Absolute value equation mode: B is the identity.
    #[arg(long)]
    pub ave: bool,
}

impl InstanceArgs {
    fn load(&self, rhs: Option<&PathBuf>) -> Result<GaveInstance> {
        let a = load_matrix_market(&self.a)?;
        let b = match (&self.b, self.ave) {
            (Some(path), false) => load_matrix_market(path)?,
            (None, true) => DenseMatrix::identity(a.rows()),
            _ => unreachable!("clap enforces B xor ave"),
        };
        let rhs = rhs.map(|p| load_vector_market(p)).transpose()?;
        GaveInstance::new(a, b, rhs)
    }
}

#[derive(Debug, Args)]
pub struct CertifyKnobs {
    /// Cap on the 2^n sign-vertex sweep.
    #[arg(long, default_value_t = 14)]
    pub n_cap_vertex: usize,
    /// Cap on the 2^n - 1 principal-minor sweep.
    #[arg(long, default_value_t = 12)]
    pub n_cap_minor: usize,
    /// Random diagonals for the sampled box condition.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// Seed for every random draw in the run.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the vertex and sampling sweeps
    /// (falls back to GAVE_THREADS, then 1).
    #[arg(long)]
    pub threads: Option<usize>,
}

impl CertifyKnobs {
    fn params(&self) -> CheckParams {
        CheckParams {
            n_cap_vertex: self.n_cap_vertex,
            n_cap_minor: self.n_cap_minor,
            samples: self.samples,
            seed: self.seed,
            threads: resolve_threads(self.threads),
        }
    }
}

fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("GAVE_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(1)
    .max(1)
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[command(flatten)]
    pub knobs: CertifyKnobs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Enumerate,
    Picard,
    Newton,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Right-hand side b as an n x 1 Matrix Market array.
    #[arg(long = "b", value_name = "PATH")]
    pub rhs: PathBuf,
    #[arg(long, value_enum, default_value_t = SolveMethod::Enumerate)]
    pub method: SolveMethod,
    /// Convergence and residual-acceptance tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: u64,
    /// Cap on the 2^n branch enumeration.
    #[arg(long, default_value_t = 14)]
    pub n_cap: usize,
    /// Accepted for config parity; the solvers are sequential and their
    /// output is identical for any value.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    /// Instance dimension.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// gaussian | diagonal-dominant | scaled-contraction | diagonal
    #[arg(long, default_value = "gaussian")]
    pub ensemble: Ensemble,
    /// Target sigma_1(A^-1 B) for the scaled-contraction ensemble.
    #[arg(long)]
    pub target: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Condition that must hold on the witness.
    #[arg(long)]
    pub hold: ConditionId,
    /// Condition that must fail on the witness.
    #[arg(long)]
    pub fail: ConditionId,
    /// Maximum number of seeded draws.
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[command(flatten)]
    pub knobs: CertifyKnobs,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Number of seeded instances.
    #[arg(long, default_value_t = 100)]
    pub instances: u64,
    /// Random right-hand sides checked per instance.
    #[arg(long, default_value_t = 20)]
    pub rhs_per_instance: u64,
    #[command(flatten)]
    pub knobs: CertifyKnobs,
}

// ---------------------------------------------------------------------
// deterministic JSON rendering

/// serde_json formatter writing every float with 17 significant digits.
/// Non-finite values never reach it: serde_json emits them as null, and
/// every report payload validates finiteness at construction.
struct SigFigs;

impl serde_json::ser::Formatter for SigFigs {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Serialize any report payload with the 17-significant-digit float rule.
pub fn to_report_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigs);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Config(format!("report serialization failed: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::Config(format!("non-utf8 report: {e}")))
}

#[derive(Serialize)]
struct ReportDoc<C: Serialize, R: Serialize> {
    command: &'static str,
    version: &'static str,
    config: C,
    result: R,
    wall_time_ms: f64,
}

fn render<C: Serialize, R: Serialize>(
    command: &'static str,
    config: C,
    result: R,
    started: Instant,
) -> Result<String> {
    to_report_json(&ReportDoc {
        command,
        version: crate::VERSION,
        config,
        result,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

/// Drop the wall-time field (always the final field) for byte comparisons.
pub fn strip_wall_time(report: &str) -> &str {
    match report.rfind(",\"wall_time_ms\":") {
        Some(idx) => &report[..idx],
        None => report,
    }
}

// ---------------------------------------------------------------------
// config echoes (field order is the report contract)

#[derive(Serialize)]
struct CheckConfigEcho {
    a: String,
    b: Option<String>,
    ave: bool,
    n_cap_vertex: usize,
    n_cap_minor: usize,
    samples: u64,
    seed: u64,
    threads: usize,
    strict_band: f64,
}

#[derive(Serialize)]
struct SolveConfigEcho {
    a: String,
    b: Option<String>,
    ave: bool,
    rhs: String,
    method: SolveMethod,
    tol: f64,
    max_iter: u64,
    n_cap: usize,
    threads: usize,
}

#[derive(Serialize)]
struct CompareConfigEcho {
    hold: ConditionId,
    fail: ConditionId,
    budget: u64,
    n: usize,
    ensemble: Ensemble,
    target: Option<f64>,
    n_cap_vertex: usize,
    n_cap_minor: usize,
    samples: u64,
    seed: u64,
    threads: usize,
}

#[derive(Serialize)]
struct FuzzConfigEcho {
    n: usize,
    ensemble: Ensemble,
    target: Option<f64>,
    instances: u64,
    rhs_per_instance: u64,
    n_cap_vertex: usize,
    n_cap_minor: usize,
    samples: u64,
    seed: u64,
    threads: usize,
}

// ---------------------------------------------------------------------
// command execution

/// Execute one parsed command and return the JSON report text.
pub fn run_command(cli: &Cli) -> Result<String> {
    let started = Instant::now();
    match &cli.command {
        Command::Check(args) => {
            let inst = args.instance.load(None)?;
            let params = args.knobs.params();
            let report = hierarchy_report(&inst, &params)?;
            render(
                "check",
                CheckConfigEcho {
                    a: args.instance.a.display().to_string(),
                    b: args.instance.b.as_ref().map(|p| p.display().to_string()),
                    ave: args.instance.ave,
                    n_cap_vertex: params.n_cap_vertex,
                    n_cap_minor: params.n_cap_minor,
                    samples: params.samples,
                    seed: params.seed,
                    threads: params.threads,
                    strict_band: STRICT_BAND,
                },
                report,
                started,
            )
        }
        Command::Solve(args) => {
            let inst = args.instance.load(Some(&args.rhs))?;
            let report = match args.method {
                SolveMethod::Enumerate => enumerate_branch_solutions(&inst, args.n_cap)?,
                SolveMethod::Picard => picard_solve(&inst, args.tol, args.max_iter)?,
                SolveMethod::Newton => newton_solve(&inst, args.tol, args.max_iter)?,
            };
            render(
                "solve",
                SolveConfigEcho {
                    a: args.instance.a.display().to_string(),
                    b: args.instance.b.as_ref().map(|p| p.display().to_string()),
                    ave: args.instance.ave,
                    rhs: args.rhs.display().to_string(),
                    method: args.method,
                    tol: args.tol,
                    max_iter: args.max_iter,
                    n_cap: args.n_cap,
                    threads: resolve_threads(args.threads),
                },
                report,
                started,
            )
        }
        Command::Compare(args) => {
            let params = args.knobs.params();
            let spec = EnsembleSpec {
                n: args.ensemble.n,
                ensemble: args.ensemble.ensemble,
                target: args.ensemble.target,
                seed: params.seed,
            };
            let query = SeparationQuery {
                must_hold: args.hold,
                must_fail: args.fail,
                budget: args.budget,
                seed: params.seed,
            };
            let outcome = find_separating_instance(&query, &spec, &params)?;
            render(
                "compare",
                CompareConfigEcho {
                    hold: args.hold,
                    fail: args.fail,
                    budget: args.budget,
                    n: spec.n,
                    ensemble: spec.ensemble,
                    target: spec.target,
                    n_cap_vertex: params.n_cap_vertex,
                    n_cap_minor: params.n_cap_minor,
                    samples: params.samples,
                    seed: params.seed,
                    threads: params.threads,
                },
                outcome,
                started,
            )
        }
        Command::Fuzz(args) => {
            let params = args.knobs.params();
            let spec = EnsembleSpec {
                n: args.ensemble.n,
                ensemble: args.ensemble.ensemble,
                target: args.ensemble.target,
                seed: params.seed,
            };
            let summary =
                uniqueness_crosscheck(&spec, args.instances, args.rhs_per_instance, &params)?;
            render(
                "fuzz",
                FuzzConfigEcho {
                    n: spec.n,
                    ensemble: spec.ensemble,
                    target: spec.target,
                    instances: args.instances,
                    rhs_per_instance: args.rhs_per_instance,
                    n_cap_vertex: params.n_cap_vertex,
                    n_cap_minor: params.n_cap_minor,
                    samples: params.samples,
                    seed: params.seed,
                    threads: params.threads,
                },
                summary,
                started,
            )
        }
    }
}

/// Machine-readable error document for a failed run.
pub fn error_json(err: &Error) -> String {
    #[derive(Serialize)]
    struct ErrorDoc {
        error: &'static str,
        detail: String,
    }
    to_report_json(&ErrorDoc {
        error: err.code(),
        detail: err.to_string(),
    })
    .unwrap_or_else(|_| format!("{{\"error\":\"{}\",\"detail\":\"unprintable\"}}", err.code()))
}
