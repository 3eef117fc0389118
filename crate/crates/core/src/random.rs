//! Seeded sampling helpers. Every random quantity in the crate is derived from
//! an explicit 64-bit seed through these functions.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::C64;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for sub-task `index` of a seeded run.
pub fn substream(seed: u64, index: u64) -> SeededRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index.wrapping_add(1));
    r
}

pub fn gaussian(rng: &mut SeededRng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn gaussian_vec(rng: &mut SeededRng, n: usize) -> Vec<C64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

/// Uniform point on the unit sphere of `C^n`.
pub fn unit_vector(rng: &mut SeededRng, n: usize) -> DVector<C64> {
    loop {
        let v = DVector::from_vec(gaussian_vec(rng, n));
        let norm = v.norm();
        if norm > 1e-12 {
            return v.unscale(norm);
        }
    }
}

pub fn unimodular(rng: &mut SeededRng) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Complex Ginibre matrix with standard normal entries.
pub fn gaussian_matrix(rng: &mut SeededRng, d: usize) -> DMatrix<C64> {
    DMatrix::from_fn(d, d, |_, _| gaussian(rng))
}

pub fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
