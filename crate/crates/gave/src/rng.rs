//! Counter-based pseudo-random stream (SplitMix64).
//!
//! Output `i` of the stream with seed `s` is
//! `mix(s + (i+1) * 0x9E3779B97F4A7C15)` with the two-multiply finalizer
//! `z ^= z>>30; z *= 0xBF58476D1CE4E5B9; z ^= z>>27; z *= 0x94D049BB133111EB;
//! z ^= z>>31` (all arithmetic mod 2^64). Every output is a pure function of
//! `(seed, index)`, so disjoint index ranges can be evaluated in parallel
//! and still reproduce the sequential stream, and an independent
//! implementation of the same constants reproduces every draw bit for bit.
//!
//! Uniform reals take the top 53 bits: `u = (out >> 11) · 2⁻⁵³ ∈ [0,1)`,
//! and the symmetric map is `2u − 1 ∈ [−1,1)`. Gaussian draws use the
//! Box–Muller cosine branch on the consecutive index pair `(2k, 2k+1)`:
//! `z_k = sqrt(−2·ln(1−u_{2k})) · cos(2π·u_{2k+1})`.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Raw 64-bit output at `index` of the stream seeded by `seed`.
#[inline]
pub fn stream_at(seed: u64, index: u64) -> u64 {
    mix(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Uniform draw in [0, 1) at `index`.
#[inline]
pub fn unit_at(seed: u64, index: u64) -> f64 {
    (stream_at(seed, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw in [-1, 1) at `index`.
#[inline]
pub fn symmetric_at(seed: u64, index: u64) -> f64 {
    2.0 * unit_at(seed, index) - 1.0
}

/// Standard normal draw `k`, consuming stream indices 2k and 2k+1.
#[inline]
pub fn gaussian_at(seed: u64, k: u64) -> f64 {
    let u1 = unit_at(seed, 2 * k);
    let u2 = unit_at(seed, 2 * k + 1);
    (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Derive an independent sub-stream seed; used to give each instance,
/// right-hand side or retry its own stream.
#[inline]
pub fn derive(seed: u64, salt: u64) -> u64 {
    stream_at(seed, salt)
}

/// Sequential convenience wrapper over the counter stream.
#[derive(Debug, Clone)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = stream_at(self.seed, self.counter);
        self.counter += 1;
        v
    }

    pub fn next_unit(&mut self) -> f64 {
        let v = unit_at(self.seed, self.counter);
        self.counter += 1;
        v
    }

    pub fn next_symmetric(&mut self) -> f64 {
        let v = symmetric_at(self.seed, self.counter);
        self.counter += 1;
        v
    }

    /// Gaussian draw consuming two counter positions.
    pub fn next_gaussian(&mut self) -> f64 {
        debug_assert!(self.counter % 2 == 0 || true);
        let u1 = self.next_unit();
        let u2 = self.next_unit();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
