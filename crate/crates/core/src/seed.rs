//! Deterministic seed derivation.
//!
//! Every random stage of the pipeline draws from a ChaCha8 stream seeded
//! through this module, so a single master seed reproduces a whole run.
//! The fan-out is pinned to two documented mixers rather than the standard
//! library hasher, whose output may change between toolchain releases:
//! FNV-1a (64-bit offset basis 14695981039346656037, prime 1099511628211)
//! over the stage name, xor-folded into the master seed, then finalized
//! with one SplitMix64 round.

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = FNV_OFFSET;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the sub-seed for a named stage.
pub fn fanout(master: u64, stage: &str) -> u64 {
    splitmix64(master ^ fnv1a64(stage.as_bytes()))
}

/// Derives the sub-seed for the `index`-th instance of a named stage
/// (repetitions, restarts).
pub fn fanout_indexed(master: u64, stage: &str, index: u64) -> u64 {
    splitmix64(fanout(master, stage) ^ splitmix64(index))
}
