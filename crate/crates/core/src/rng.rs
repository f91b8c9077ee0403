//! Seeded random streams.
//!
//! Every Monte Carlo routine draws from ChaCha8 (`rand_chacha::ChaCha8Rng`).
//! A run seed fixes the key; trial `k` of a routine reads stream `k`, so
//! trials are independent of scheduling and results are bit-reproducible
//! whatever the thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SwpRng = ChaCha8Rng;

/// Stream for one trial of one routine.
pub fn trial_rng(seed: u64, trial: u64) -> SwpRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Derives an independent run seed for a labelled sub-computation, so that
/// e.g. the null and alternative simulations never share a stream.
pub fn derive_seed(seed: u64, label: &str, index: u64) -> u64 {
    // FNV-1a over the label, then a SplitMix64 finaliser
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = seed ^ h ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
