//! Counter-based seed derivation.
//!
//! Every random draw in the workspace is produced by a ChaCha stream keyed
//! on `(realization_seed, purpose, sub_index)`, where the realization seed
//! is itself a mix of the master seed and a trial counter. Trials can
//! therefore run in any order (or in parallel) and still reproduce
//! bit-identical results.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Purpose tags keep independent random streams from aliasing when they
/// share a realization seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    /// Channel coefficient draws.
    Channels,
    /// Random transmit-beamformer initializations.
    TxInit,
    /// Data symbols and additive noise in the link simulation.
    LinkSim,
}

impl Purpose {
    fn tag(self) -> u64 {
        match self {
            Purpose::Channels => 0x4348_414e,
            Purpose::TxInit => 0x5458_494e,
            Purpose::LinkSim => 0x4c4e_4b53,
        }
    }
}

/// SplitMix64-style finalizer over two words.
pub fn mix64(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The per-realization seed for `trial_index` under `master_seed`.
pub fn realization_seed(master_seed: u64, trial_index: u64) -> u64 {
    mix64(master_seed, trial_index.wrapping_add(1))
}

/// Deterministic RNG for one (realization, purpose, sub-index) triple.
pub fn rng_for(realization_seed: u64, purpose: Purpose, sub_index: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&realization_seed.to_le_bytes());
    key[8..16].copy_from_slice(&purpose.tag().to_le_bytes());
    key[16..24].copy_from_slice(&sub_index.to_le_bytes());
    ChaCha12Rng::from_seed(key)
}
