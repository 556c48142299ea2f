//! Helpers shared by the integration suites.

use gave::linalg::DenseMatrix;
use gave::rng::CounterRng;

/// Uniform matrix with entries in [-1, 1).
pub fn uniform_matrix(rng: &mut CounterRng, n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |_, _| rng.next_symmetric())
}

/// Diagonally dominant matrix with positive diagonal (a P-matrix).
pub fn diag_dominant_matrix(rng: &mut CounterRng, n: usize) -> DenseMatrix {
    let mut m = uniform_matrix(rng, n);
    for i in 0..n {
        let off: f64 = (0..n)
            .filter(|&j| j != i)
            .map(|j| m[(i, j)].abs())
            .sum();
        m[(i, i)] = off + 0.5 + rng.next_unit();
    }
    m
}

/// Infinity-norm distance between two slices.
pub fn inf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
