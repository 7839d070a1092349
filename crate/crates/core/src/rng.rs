//! Reproducible random streams.
//!
//! Generator: ChaCha8 (`rand_chacha` 0.9) seeded with a 64-bit seed via `seed_from_u64`.
//! Parallel work is split into fixed-size chunks; chunk `c` draws from ChaCha stream `c` of
//! the same seed, so results do not depend on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

pub type StreamRng = ChaCha8Rng;

/// Samples per parallel chunk; part of the reproducibility contract.
pub const CHUNK: usize = 1024;

pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `χ²_ν` draw (Marsaglia–Tsang Gamma(ν/2, 2)); `ν = 0` gives 0.
pub fn chi_squared<R: rand::Rng + ?Sized>(nu: f64, rng: &mut R) -> f64 {
    if nu <= 0.0 {
        return 0.0;
    }
    Gamma::new(0.5 * nu, 2.0).expect("positive shape").sample(rng)
}

pub fn chi<R: rand::Rng + ?Sized>(nu: f64, rng: &mut R) -> f64 {
    chi_squared(nu, rng).sqrt()
}

/// `count` draws of `f`, in order, generated chunk-parallel from `seed`.
pub fn parallel_draws<T, F>(seed: u64, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut StreamRng) -> T + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, c as u64);
            let len = CHUNK.min(count - c * CHUNK);
            (0..len).map(|_| f(&mut rng)).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}
