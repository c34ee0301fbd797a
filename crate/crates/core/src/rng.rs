//! Seeded random streams.
//!
//! Every trial is driven by a single `u64` seed. Each component draws from its
//! own ChaCha stream (same key, different stream id), so swapping a learner or an
//! attack never shifts the noise or context draws of the rest of the run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Stream {
    Instance = 0,
    Contexts = 1,
    Noise = 2,
    Learner = 3,
    Adversary = 4,
}

/// Independent generator for `stream` under `seed`.
pub fn stream(seed: u64, stream: Stream) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}
