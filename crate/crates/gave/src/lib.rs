//! Certificates, witnesses and solvers for the generalized absolute value
//! equation Ax + B|x| = b.
//!
//! The library answers two questions about a pair of square real matrices
//! (A, B):
//!
//! 1. **Does Ax + B|x| = b have exactly one solution for every b?**
//!    [`certify`] implements a family of named certificates — two exact
//!    (exponential-cost) criteria based on sign-vertex determinants and
//!    principal minors, and a hierarchy of cheap sufficient conditions
//!    built from singular values and spectral radii — each returning a
//!    verdict with numeric evidence and, on failure, a concrete witness.
//! 2. **What are the solutions of a concrete instance?** [`solve`] has an
//!    exact branch-enumeration oracle for small n, a Picard fixed-point
//!    iteration under the contraction condition sigma_1(A^-1 B) < 1, and a
//!    semismooth Newton iteration over sign patterns.
//!
//! [`probe`] generates seeded random ensembles, searches for instances
//! separating pairs of conditions, and cross-checks certificates against
//! the enumeration oracle. [`cli`] wires everything into the `gave` binary
//! with deterministic JSON reports.
//!
//! Everything is deterministic: randomness comes from a counter-based
//! generator ([`rng`]), exponential sweeps are gated by dimension caps, and
//! parallel sweeps reduce in a fixed order so reports are byte-identical
//! for any thread count.

pub mod certify;
pub mod cli;
pub mod error;
pub mod instance;
pub mod io;
pub mod linalg;
pub mod probe;
pub mod rng;
pub mod solve;

mod par;

pub use error::{Error, Result};
pub use instance::{box_from_unit, BoxDiagonal, GaveInstance, SignVector};
pub use linalg::{DenseMatrix, DenseVector, DetSign, Sign};

/// Crate version, echoed in every CLI report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
