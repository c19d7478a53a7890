//! Seeded random streams. Every sample index gets its own ChaCha stream, so
//! sample `i` is identical whether `N` is 100 or 10 000 and loops may be
//! split across workers without changing results.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// RNG for sample `index` under master seed `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Derives an independent master seed for a named sub-task.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Standard Gaussian vector for sample `index`.
pub fn gaussian_sample(seed: u64, index: u64, n: usize) -> Vec<f64> {
    gaussian_vector(&mut sample_rng(seed, index), n)
}

/// Uniform point on the unit sphere of `R^n` (`n >= 1`).
pub fn sphere_sample(seed: u64, index: u64, n: usize) -> Vec<f64> {
    let mut rng = sample_rng(seed, index);
    loop {
        let g = gaussian_vector(&mut rng, n);
        let norm = crate::linalg::norm(&g);
        if norm > 1e-12 {
            return g.into_iter().map(|v| v / norm).collect();
        }
    }
}
