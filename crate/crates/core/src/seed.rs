//! Counter-based seed derivation.
//!
//! Every random stream of a trial is seeded from `(master_seed, domain,
//! trial_index, stream)` so that trials can run in any order, on any number
//! of workers, and still reproduce bit-for-bit. The derivation is a chain of
//! SplitMix64 finalizers:
//!
//! ```text
//! h0 = mix(master_seed)
//! h1 = mix(h0 ^ domain)
//! h2 = mix(h1 ^ trial_index)
//! seed = mix(h2 ^ stream)
//! ```
//!
//! where `mix(z)` is SplitMix64 applied to `z` (golden-gamma increment then
//! the 30/27/31 xor-shift-multiply finalizer). Each seed initializes a
//! ChaCha8 generator through `SeedableRng::seed_from_u64`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Which family of trials a seed belongs to. Null-calibration trials never
/// share streams with target trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Target = 0,
    Null = 1,
}

/// Independent random stream labels used inside a single trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    /// Entangled pair (or classical phase noise).
    Source = 1,
    /// Thermal environment entering the receiver.
    Env = 2,
    /// Vacuum at the empty beam-splitter port.
    Vac = 3,
    /// Reference field of the first probe homodyne.
    Lo1 = 4,
    /// Reference field of the second probe homodyne.
    Lo2 = 5,
    /// Reference field of the idler homodyne.
    Lo3 = 6,
}

pub fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master_seed: u64, domain: Domain, trial_index: u64, stream: Stream) -> u64 {
    let h = splitmix64(master_seed);
    let h = splitmix64(h ^ domain as u64);
    let h = splitmix64(h ^ trial_index);
    splitmix64(h ^ stream as u64)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seeds for every stream of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialSeeds {
    pub source: u64,
    pub env: u64,
    pub vac: u64,
    pub lo1: u64,
    pub lo2: u64,
    pub lo3: u64,
}

impl TrialSeeds {
    pub fn derive(master_seed: u64, domain: Domain, trial_index: u64) -> Self {
        let d = |s| derive_seed(master_seed, domain, trial_index, s);
        Self {
            source: d(Stream::Source),
            env: d(Stream::Env),
            vac: d(Stream::Vac),
            lo1: d(Stream::Lo1),
            lo2: d(Stream::Lo2),
            lo3: d(Stream::Lo3),
        }
    }
}
