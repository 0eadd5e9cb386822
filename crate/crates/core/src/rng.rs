//! Seeded, splittable randomness.
//!
//! Every stochastic routine draws from a ChaCha stream keyed by
//! `(seed, stream_id)`; within a stream the word position is the step
//! counter. Work split across threads uses one stream per work unit, so the
//! output never depends on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
