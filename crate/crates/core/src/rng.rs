//! Reproducible, splittable random streams.
//!
//! Every stream is a ChaCha8 generator keyed by the master seed, with the
//! 64-bit ChaCha stream selector set to a `stream_id`. Distinct ids under the
//! same seed yield non-overlapping keystreams; identical (seed, id) pairs
//! replay the same sequence bit for bit.
//!
//! Experiment streams are addressed by a [`StreamKey`]
//! `(replication, role, model)`; its id is
//!
//! ```text
//! id = mix(mix(mix(replication) ^ role_code) ^ model)
//! ```
//!
//! where `mix` is the SplitMix64 finalizer and `role_code` is the fixed
//! integer code of [`StreamRole`].

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_id);
        Self {
            master_seed,
            stream_id,
            inner,
        }
    }

    pub fn for_key(master_seed: u64, key: StreamKey) -> Self {
        Self::new(master_seed, key.stream_id())
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    #[inline]
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
}

/// What a stream is used for inside one replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamRole {
    CrudeMc,
    Importance,
    Bridge,
    BridgeOptimal,
    Harmonic,
    Chib,
    PseudoRatio,
    /// Gibbs chains, shared by every chain-consuming estimator.
    Gibbs,
    BridgeSameSpace,
}

impl StreamRole {
    pub fn code(self) -> u64 {
        match self {
            StreamRole::CrudeMc => 1,
            StreamRole::Importance => 2,
            StreamRole::Bridge => 3,
            StreamRole::BridgeOptimal => 4,
            StreamRole::Harmonic => 5,
            StreamRole::Chib => 6,
            StreamRole::PseudoRatio => 7,
            StreamRole::Gibbs => 8,
            StreamRole::BridgeSameSpace => 9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub replication: u64,
    pub role: StreamRole,
    pub model: u64,
}

impl StreamKey {
    pub fn new(replication: u64, role: StreamRole, model: u64) -> Self {
        Self {
            replication,
            role,
            model,
        }
    }

    pub fn stream_id(&self) -> u64 {
        splitmix64(splitmix64(splitmix64(self.replication) ^ self.role.code()) ^ self.model)
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
