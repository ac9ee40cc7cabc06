//! Seeded random streams.
//!
//! Every random draw in the crate goes through [`stream`], a SplitMix64
//! generator keyed by a 64-bit seed. Restart `r` of a seeded run uses
//! `seed.wrapping_add(r)`.

use rand::{Rng, RngExt, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::SplitMix64;

pub type Stream = SplitMix64;

pub fn stream(seed: u64) -> Stream {
    SplitMix64::seed_from_u64(seed)
}

/// Uniformly distributed unit vector in `R^dim`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform draw from `[lo, hi]`.
pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}
