//! Named RNG substreams.  One master seed fans out into independent,
//! reproducible streams: instance sampling, algorithm coins, label tables,
//! codec fallbacks.  Trials get their own streams so parallel execution
//! cannot change results.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the named substream of `seed`.
pub fn substream_seed(seed: u64, name: &str) -> u64 {
    splitmix(seed ^ splitmix(fnv1a(name.as_bytes())))
}

/// Seed for one trial within a named substream.
pub fn trial_seed(seed: u64, name: &str, trial: u64) -> u64 {
    splitmix(substream_seed(seed, name) ^ splitmix(trial.wrapping_add(1)))
}

pub fn substream(seed: u64, name: &str) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(substream_seed(seed, name))
}

pub fn trial_stream(seed: u64, name: &str, trial: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(trial_seed(seed, name, trial))
}
