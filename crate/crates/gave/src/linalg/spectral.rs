//! Spectral radii: Perron root of nonnegative matrices by power iteration,
//! and the general case through the real Schur form (Francis double-shift
//! QR), which needs no complex arithmetic.

use crate::error::{Error, Result};
use crate::linalg::matrix::DenseMatrix;

const POWER_MAX_ITERS: usize = 50_000;
const POWER_RTOL: f64 = 1e-12;
/// Consecutive converged Rayleigh steps required before accepting.
const POWER_STABLE_STEPS: usize = 3;

/// Perron root of an entrywise nonnegative matrix by power iteration from
/// the all-ones direction, stopping when successive Rayleigh quotients
/// agree to 1e-12 relative. Falls back to the caller on `NoConvergence`
/// (periodic matrices can cycle instead of converging).
pub fn spectral_radius_nonneg(m: &DenseMatrix) -> Result<f64> {
    assert!(m.is_square());
    assert!(
        m.as_slice().iter().all(|&v| v >= 0.0),
        "spectral_radius_nonneg requires entrywise nonnegative input"
    );
    let n = m.rows();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut lambda_prev = f64::NAN;
    let mut stable = 0usize;
    for _ in 0..POWER_MAX_ITERS {
        let w = m.mul_vec(&v);
        let lambda: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let norm_w = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm_w == 0.0 {
            // m^k annihilated a strictly positive start vector; for
            // nonnegative m that forces m^k = 0, so the radius is zero.
            return Ok(0.0);
        }
        if (lambda - lambda_prev).abs() <= POWER_RTOL * lambda.abs().max(f64::MIN_POSITIVE) {
            stable += 1;
            if stable >= POWER_STABLE_STEPS {
                return Ok(lambda.max(0.0));
            }
        } else {
            stable = 0;
        }
        lambda_prev = lambda;
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm_w;
        }
    }
    Err(Error::NoConvergence {
        what: "power iteration",
        limit: POWER_MAX_ITERS,
        best: lambda_prev,
    })
}

/// Spectral radius of a general real square matrix: largest eigenvalue
/// modulus read off the real Schur form.
pub fn spectral_radius_general(m: &DenseMatrix) -> Result<f64> {
    Ok(eigenvalue_moduli(m)?
        .into_iter()
        .fold(0.0f64, f64::max))
}

/// Moduli of all eigenvalues (unordered), via Hessenberg reduction and
/// Francis double-shift QR. Real arithmetic throughout; complex pairs are
/// read from the 2x2 diagonal blocks of the quasi-triangular form.
pub fn eigenvalue_moduli(m: &DenseMatrix) -> Result<Vec<f64>> {
    assert!(m.is_square());
    let n = m.rows();
    if n == 1 {
        return Ok(vec![m[(0, 0)].abs()]);
    }
    let mut h = hessenberg(m);
    let mut moduli = Vec::with_capacity(n);
    let max_total = 100 * n;
    let mut total_iters = 0usize;

    let mut hi = n - 1;
    let mut stalls = 0usize;
    loop {
        // flush negligible subdiagonals
        for i in 1..=hi {
            let tol = f64::EPSILON * (h[(i - 1, i - 1)].abs() + h[(i, i)].abs());
            if h[(i, i - 1)].abs() <= tol {
                h[(i, i - 1)] = 0.0;
            }
        }
        // deflate from the bottom
        if hi == 0 || h[(hi, hi - 1)] == 0.0 {
            moduli.push(h[(hi, hi)].abs());
            if hi == 0 {
                break;
            }
            hi -= 1;
            stalls = 0;
            continue;
        }
        if hi == 1 || h[(hi - 1, hi - 2)] == 0.0 {
            let (m1, m2) = two_by_two_moduli(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            moduli.push(m1);
            moduli.push(m2);
            if hi == 1 {
                break;
            }
            hi -= 2;
            stalls = 0;
            continue;
        }
        // active window [lo, hi]
        let mut lo = hi - 1;
        while lo > 0 && h[(lo, lo - 1)] != 0.0 {
            lo -= 1;
        }
        total_iters += 1;
        stalls += 1;
        if total_iters > max_total {
            // conservative upper bound on every eigenvalue modulus
            let best = m.norm_inf().min(m.norm_one());
            return Err(Error::NoConvergence {
                what: "Francis QR iteration",
                limit: max_total,
                best,
            });
        }
        francis_step(&mut h, lo, hi, stalls);
    }
    Ok(moduli)
}

/// Householder reduction to upper Hessenberg form (eigenvalue-preserving).
fn hessenberg(m: &DenseMatrix) -> DenseMatrix {
    let n = m.rows();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = ((k + 1)..n)
            .map(|i| h[(i, k)] * h[(i, k)])
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if h[(k + 1, k)] >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; n];
        v[k + 1] = h[(k + 1, k)] - alpha;
        for i in (k + 2)..n {
            v[i] = h[(i, k)];
        }
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        if vtv == 0.0 {
            continue;
        }
        let beta = 2.0 / vtv;
        // left: H <- (I - beta v v^T) H
        for j in k..n {
            let dot: f64 = ((k + 1)..n).map(|i| v[i] * h[(i, j)]).sum();
            let scale = beta * dot;
            for i in (k + 1)..n {
                h[(i, j)] -= scale * v[i];
            }
        }
        // right: H <- H (I - beta v v^T)
        for i in 0..n {
            let dot: f64 = ((k + 1)..n).map(|j| h[(i, j)] * v[j]).sum();
            let scale = beta * dot;
            for j in (k + 1)..n {
                h[(i, j)] -= scale * v[j];
            }
        }
        // enforce the zeros the reflector introduced
        h[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            h[(i, k)] = 0.0;
        }
    }
    h
}

/// One implicit double-shift sweep on the active window [lo, hi] of h.
/// Every tenth stalled sweep swaps in the EISPACK exceptional shift.
fn francis_step(h: &mut DenseMatrix, lo: usize, hi: usize, stalls: usize) {
    let (shift_sum, shift_prod) = if stalls % 10 == 0 {
        let s = h[(hi, hi - 1)].abs() + h[(hi - 1, hi - 2)].abs();
        (1.5 * s, -0.4375 * s * s)
    } else {
        let a = h[(hi - 1, hi - 1)];
        let b = h[(hi - 1, hi)];
        let c = h[(hi, hi - 1)];
        let d = h[(hi, hi)];
        (a + d, a * d - b * c)
    };

    let mut x = h[(lo, lo)] * h[(lo, lo)] + h[(lo, lo + 1)] * h[(lo + 1, lo)]
        - shift_sum * h[(lo, lo)]
        + shift_prod;
    let mut y = h[(lo + 1, lo)] * (h[(lo, lo)] + h[(lo + 1, lo + 1)] - shift_sum);
    let mut z = if lo + 2 <= hi {
        h[(lo + 1, lo)] * h[(lo + 2, lo + 1)]
    } else {
        0.0
    };

    for k in lo..=(hi - 2) {
        if let Some((v, beta)) = householder3(x, y, z) {
            let col_start = if k > lo { k - 1 } else { lo };
            for j in col_start..=hi {
                let dot = v[0] * h[(k, j)] + v[1] * h[(k + 1, j)] + v[2] * h[(k + 2, j)];
                let s = beta * dot;
                h[(k, j)] -= s * v[0];
                h[(k + 1, j)] -= s * v[1];
                h[(k + 2, j)] -= s * v[2];
            }
            let row_end = hi.min(k + 3);
            for i in lo..=row_end {
                let dot = v[0] * h[(i, k)] + v[1] * h[(i, k + 1)] + v[2] * h[(i, k + 2)];
                let s = beta * dot;
                h[(i, k)] -= s * v[0];
                h[(i, k + 1)] -= s * v[1];
                h[(i, k + 2)] -= s * v[2];
            }
        }
        x = h[(k + 1, k)];
        y = h[(k + 2, k)];
        z = if k + 3 <= hi { h[(k + 3, k)] } else { 0.0 };
    }
    // final 2-element reflector
    if let Some((v, beta)) = householder2(x, y) {
        let k = hi - 1;
        for j in (k - 1).max(lo)..=hi {
            let dot = v[0] * h[(k, j)] + v[1] * h[(k + 1, j)];
            let s = beta * dot;
            h[(k, j)] -= s * v[0];
            h[(k + 1, j)] -= s * v[1];
        }
        for i in lo..=hi {
            let dot = v[0] * h[(i, k)] + v[1] * h[(i, k + 1)];
            let s = beta * dot;
            h[(i, k)] -= s * v[0];
            h[(i, k + 1)] -= s * v[1];
        }
    }
}

fn householder3(x: f64, y: f64, z: f64) -> Option<([f64; 3], f64)> {
    let norm = (x * x + y * y + z * z).sqrt();
    if norm == 0.0 {
        return None;
    }
    let alpha = if x >= 0.0 { -norm } else { norm };
    let v = [x - alpha, y, z];
    let vtv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if vtv == 0.0 {
        return None;
    }
    Some((v, 2.0 / vtv))
}

fn householder2(x: f64, y: f64) -> Option<([f64; 2], f64)> {
    let norm = (x * x + y * y).sqrt();
    if norm == 0.0 {
        return None;
    }
    let alpha = if x >= 0.0 { -norm } else { norm };
    let v = [x - alpha, y];
    let vtv = v[0] * v[0] + v[1] * v[1];
    if vtv == 0.0 {
        return None;
    }
    Some((v, 2.0 / vtv))
}

/// Eigenvalue moduli of a real 2x2 block [[a, b], [c, d]].
fn two_by_two_moduli(a: f64, b: f64, c: f64, d: f64) -> (f64, f64) {
    let half_tr = 0.5 * (a + d);
    let det = a * d - b * c;
    let disc = half_tr * half_tr - det;
    if disc >= 0.0 {
        let root = disc.sqrt();
        let big = if half_tr >= 0.0 {
            half_tr + root
        } else {
            half_tr - root
        };
        let small = if big != 0.0 { det / big } else { 0.0 };
        (big.abs(), small.abs())
    } else {
        // complex conjugate pair; |lambda|^2 = det > 0
        let modulus = det.sqrt();
        (modulus, modulus)
    }
}
