//! Reproducible random streams.
//!
//! Replica `r` of a run with seed `s` draws from ChaCha8 keyed by `s` on
//! stream `r`. ChaCha is counter-based, so streams never overlap and the
//! result of a replica depends only on `(s, r)`, not on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}
