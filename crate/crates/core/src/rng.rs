//! Seeded randomness.
//!
//! Every random choice in the crate is drawn from a ChaCha8 stream derived
//! from a master seed and a stream index, so independent components never
//! share a generator and a run is reproduced exactly by its seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for component `stream` of the experiment seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniformly random permutation of `0..n`.
pub fn permutation<R: rand::Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
