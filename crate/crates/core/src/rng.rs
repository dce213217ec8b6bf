//! Randomness plumbing.
//!
//! Every sampler in this crate takes an explicitly passed [`RandomStream`];
//! nothing holds hidden RNG state. Streams are ChaCha8 generators, so a
//! 64-bit seed plus a replicate index fully determines every draw, across
//! platforms and across how replicates are scheduled onto workers.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The crate-wide RNG type.
pub type RandomStream = ChaCha8Rng;

/// Stream for a single-run computation.
pub fn stream_from_seed(seed: u64) -> RandomStream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream for replicate `r` of a run seeded with `seed`.
///
/// Derivation: the ChaCha key is expanded from `seed`, and the replicate
/// index selects the ChaCha stream. Replicates are therefore independent
/// and a parallel run over replicates draws exactly the same numbers as a
/// serial one.
pub fn replicate_stream(seed: u64, replicate: u64) -> RandomStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}
