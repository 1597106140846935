//! Reproducible random subsets.
//!
//! Every random draw is addressed by `(seed, stream)`: the generator is
//! ChaCha8 keyed by `ChaCha8Rng::seed_from_u64(seed)` with its 64-bit stream
//! id set to `stream`. Verifiers use stream `(tag << 56) | (n << 32) | i` for
//! the `i`-th sample at modulus `n`, so a draw never depends on how the work
//! was split across threads.
//!
//! A uniform `k`-subset of a pool is the first `k` entries of a partial
//! Fisher-Yates shuffle, where position `i` swaps with `i + (next_u64 mod
//! (len - i))`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

use crate::zn::{Modulus, ResidueSet};

pub fn stream_id(tag: u8, n: u32, index: u64) -> u64 {
    debug_assert!(index < 1 << 32 && n < 1 << 24);
    ((tag as u64) << 56) | ((n as u64) << 32) | index
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform value in `0..bound` (`bound > 0`). The modulo bias is below
/// `bound / 2^64`, far under anything observable at these sizes.
pub fn below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    rng.next_u64() % bound
}

/// Uniform value in `lo..=hi`.
pub fn between(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    lo + below(rng, hi - lo + 1)
}

/// First `k` entries of a partial shuffle of `pool`.
pub fn choose(rng: &mut ChaCha8Rng, pool: &mut [u32], k: usize) -> Vec<u32> {
    let k = k.min(pool.len());
    for i in 0..k {
        let j = i + below(rng, (pool.len() - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool[..k].to_vec()
}

/// Uniform `k`-subset of `Z_n`.
pub fn random_k_subset(rng: &mut ChaCha8Rng, modulus: Modulus, k: usize) -> ResidueSet {
    let mut pool: Vec<u32> = (0..modulus.get()).collect();
    let picked = choose(rng, &mut pool, k);
    ResidueSet::from_residues_mod(modulus, picked.into_iter().map(i64::from))
}
