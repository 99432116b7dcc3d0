//! Seeded, schedule-independent random streams.
//!
//! Every consumer gets its own ChaCha stream selected by `(seed, purpose, id)`,
//! so results never depend on evaluation order or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. Distinct purposes never share a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Purpose {
    Noise = 1,
    FoldSplit = 2,
    CvRepeatData = 3,
    Bootstrap = 4,
}

/// Stream number layout: purpose in the top byte, id in the low 56 bits.
pub fn stream(seed: u64, purpose: Purpose, id: u64) -> ChaCha8Rng {
    debug_assert!(id < 1 << 56);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((purpose as u64) << 56) | (id & ((1 << 56) - 1)));
    rng
}
