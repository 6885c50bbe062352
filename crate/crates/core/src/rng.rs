//! Seed derivation and named random streams.
//!
//! A run owns one master seed. Each stochastic component draws from its own
//! ChaCha stream derived from that seed, so switching one component on or
//! off leaves the draws of the others untouched.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Components that consume randomness during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    /// Uniform-random initial strings.
    Init,
    /// GRASP constructions (initialization and the baseline).
    Grasp,
    /// Binary tournament draws.
    Selection,
    /// The "recombine or clone" coin.
    CrossoverDecision,
    /// Uniform crossover masks.
    Recombination,
    Mutation,
}

impl Stream {
    fn tag(self) -> u64 {
        match self {
            Stream::Init => 1,
            Stream::Grasp => 2,
            Stream::Selection => 3,
            Stream::CrossoverDecision => 4,
            Stream::Recombination => 5,
            Stream::Mutation => 6,
        }
    }
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable seed for a labelled sub-experiment.
///
/// FNV-1a over the length-prefixed parts, folded into `master` with
/// SplitMix64. Stable across platforms and releases.
pub fn derive_seed(master: u64, parts: &[&[u8]]) -> u64 {
    const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = FNV_OFFSET;
    let mut eat = |b: u8| {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    };
    for part in parts {
        for b in (part.len() as u64).to_le_bytes() {
            eat(b);
        }
        for &b in *part {
            eat(b);
        }
    }
    mix64(master ^ mix64(h))
}

pub fn stream(master: u64, which: Stream) -> StreamRng {
    ChaCha8Rng::seed_from_u64(mix64(master.wrapping_add(mix64(which.tag()))))
}
