//! Seed derivation.
//!
//! Every random stream in a run is a ChaCha8 generator seeded from a 64-bit
//! value derived from the master seed by a counter-based mix:
//!
//! ```text
//! derive(master, stream, index) = mix(mix(master ^ mix(stream)) ^ index)
//! ```
//!
//! where `mix` is the SplitMix64 finalizer. Streams are distinguished by the
//! constants in [`Stream`] and the index is the generation, individual, or
//! rollout number, so no two sub-streams share a seed and none depends on how
//! many values another stream consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used everywhere in the crate.
pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Board = 1,
    InitialPopulation = 2,
    Generation = 3,
    DatasetBoard = 4,
    DatasetGenome = 5,
    AeInit = 6,
    AeSplit = 7,
    AeShuffle = 8,
}

/// SplitMix64 output function.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive(master: u64, stream: Stream, index: u64) -> u64 {
    mix(mix(master ^ mix(stream as u64)) ^ index)
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream_rng(master: u64, stream: Stream, index: u64) -> SimRng {
    rng_from_seed(derive(master, stream, index))
}
