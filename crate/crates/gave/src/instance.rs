//! Problem instances and the diagonal/sign-pattern types the certificates
//! quantify over.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

/// One equation Ax + B|x| = b. The right-hand side is optional because the
/// certificates quantify over all b; the solvers require it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaveInstance {
    pub a: DenseMatrix,
    pub b_mat: DenseMatrix,
    pub rhs: Option<DenseVector>,
}

impl GaveInstance {
    pub fn new(a: DenseMatrix, b_mat: DenseMatrix, rhs: Option<DenseVector>) -> Result<Self> {
        if !a.is_square() || !b_mat.is_square() || a.rows() != b_mat.rows() {
            return Err(Error::DimensionError(format!(
                "A ({}x{}) and B ({}x{}) must be square with equal dimension",
                a.rows(),
                a.cols(),
                b_mat.rows(),
                b_mat.cols()
            )));
        }
        if let Some(b) = &rhs {
            if b.len() != a.rows() {
                return Err(Error::DimensionError(format!(
                    "right-hand side length {} does not match dimension {}",
                    b.len(),
                    a.rows()
                )));
            }
        }
        Ok(Self { a, b_mat, rhs })
    }

    /// The absolute value equation Ax + |x| = b (B = identity).
    pub fn ave(a: DenseMatrix, rhs: Option<DenseVector>) -> Result<Self> {
        let n = a.rows();
        Self::new(a, DenseMatrix::identity(n), rhs)
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Exact test for the AVE special case.
    pub fn is_ave(&self) -> bool {
        self.b_mat.is_identity()
    }

    pub fn with_rhs(&self, rhs: DenseVector) -> Result<Self> {
        Self::new(self.a.clone(), self.b_mat.clone(), Some(rhs))
    }

    pub fn rhs_ref(&self) -> Result<&DenseVector> {
        self.rhs.as_ref().ok_or_else(|| {
            Error::DimensionError("operation requires a right-hand side".into())
        })
    }
}

/// A vertex pattern s in {-1, +1}^n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SignVector {
    entries: Vec<i8>,
}

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::Config(
                "sign vector entries must be exactly -1 or +1".into(),
            ));
        }
        if entries.is_empty() {
            return Err(Error::DimensionError("sign vector must be nonempty".into()));
        }
        Ok(Self { entries })
    }

    pub fn all_plus(n: usize) -> Self {
        Self {
            entries: vec![1; n],
        }
    }

    /// Vertex at position `k` of the reflected-binary walk: bit i of
    /// `k ^ (k >> 1)` set means entry i is -1. Position 0 is all +1 and
    /// successive positions differ in exactly one entry.
    pub fn from_gray_position(k: u64, n: usize) -> Self {
        let g = k ^ (k >> 1);
        Self {
            entries: (0..n)
                .map(|i| if (g >> i) & 1 == 1 { -1 } else { 1 })
                .collect(),
        }
    }

    /// The sign pattern of a real vector with sign(0) := +1.
    pub fn of_vector(x: &[f64]) -> Self {
        Self {
            entries: x.iter().map(|&v| if v < 0.0 { -1 } else { 1 }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> f64 {
        self.entries[i] as f64
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|&e| e as f64).collect()
    }
}

impl std::fmt::Display for SignVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<&str> = self
            .entries
            .iter()
            .map(|&e| if e > 0 { "+" } else { "-" })
            .collect();
        write!(f, "({})", s.join(","))
    }
}

/// Diagonal matrix with entries constrained to a box [lower, upper];
/// the two ranges in play are [-1, 1] and [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxDiagonal {
    pub entries: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
}

impl BoxDiagonal {
    pub fn new(entries: Vec<f64>, lower: f64, upper: f64) -> Result<Self> {
        for (index, &value) in entries.iter().enumerate() {
            if !(lower..=upper).contains(&value) || !value.is_finite() {
                return Err(Error::RangeViolation {
                    index,
                    value,
                    lower,
                    upper,
                });
            }
        }
        Ok(Self {
            entries,
            lower,
            upper,
        })
    }

    /// Box over [-1, 1].
    pub fn symmetric(entries: Vec<f64>) -> Result<Self> {
        Self::new(entries, -1.0, 1.0)
    }

    /// Box over [0, 1].
    pub fn unit(entries: Vec<f64>) -> Result<Self> {
        Self::new(entries, 0.0, 1.0)
    }

    pub fn from_sign_vector(s: &SignVector) -> Self {
        Self {
            entries: s.as_f64(),
            lower: -1.0,
            upper: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Map a diagonal over [0, 1] to one over [-1, 1] by d̄ = 1 - 2d; the
/// inverse map d = (1 - d̄)/2 makes it involutive.
pub fn box_from_unit(d: &BoxDiagonal) -> Result<BoxDiagonal> {
    if d.lower != 0.0 || d.upper != 1.0 {
        return Err(Error::Config(format!(
            "box_from_unit expects the [0,1] box, got [{}, {}]",
            d.lower, d.upper
        )));
    }
    // re-validate entries so half-open constructions cannot sneak through
    for (index, &value) in d.entries.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::RangeViolation {
                index,
                value,
                lower: 0.0,
                upper: 1.0,
            });
        }
    }
    BoxDiagonal::symmetric(d.entries.iter().map(|&v| 1.0 - 2.0 * v).collect())
}
