//! Per-replication random streams.
//!
//! Every replication draws from its own ChaCha8 stream, keyed by the master
//! seed and selected by the replication index. A replication therefore sees
//! the same numbers no matter which worker runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn replication_rng(seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng
}
