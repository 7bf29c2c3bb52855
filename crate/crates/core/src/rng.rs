//! Counter-keyed random streams.
//!
//! Every draw the GA makes comes from a stream identified by
//! `(seed, generation, role, row)`. Which worker touches a row never enters
//! the key, so all execution modes see the same random numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Init,
    Select,
    CrossoverMask,
    MutationMask,
    MutationIndex,
    Eda,
}

impl Role {
    fn tag(self) -> u64 {
        match self {
            Role::Init => 1,
            Role::Select => 2,
            Role::CrossoverMask => 3,
            Role::MutationMask => 4,
            Role::MutationIndex => 5,
            Role::Eda => 6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngPolicy {
    seed: u64,
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngPolicy {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self, generation: u64, role: Role, row: usize) -> ChaCha8Rng {
        let mut h = splitmix64(self.seed);
        h = splitmix64(h ^ generation);
        h = splitmix64(h ^ role.tag());
        h = splitmix64(h ^ row as u64);
        let mut key = [0u8; 32];
        for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
            h = splitmix64(h ^ i as u64);
            chunk.copy_from_slice(&h.to_le_bytes());
        }
        ChaCha8Rng::from_seed(key)
    }
}
