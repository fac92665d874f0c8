//! Counter-based random streams.
//!
//! Every stream is keyed by `(master seed, trial, label)` and an optional
//! sub-stream index. The key is hashed into a ChaCha8 seed, so streams for
//! distinct keys are independent and adding a new label never perturbs the
//! randomness of existing ones. Results do not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Generator type used for every stream in the crate.
pub type StreamRng = ChaCha8Rng;

/// Identifies one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey<'a> {
    pub seed: u64,
    pub trial: u64,
    pub label: &'a str,
}

impl<'a> StreamKey<'a> {
    pub fn new(seed: u64, trial: u64, label: &'a str) -> Self {
        Self { seed, trial, label }
    }

    pub fn rng(&self) -> StreamRng {
        self.sub_rng(0)
    }

    /// Sub-stream `index` of this key, e.g. one per interference column.
    pub fn sub_rng(&self, index: u64) -> StreamRng {
        let mut hasher = Sha256::new();
        hasher.update(b"duplex-stream/v1");
        hasher.update(self.seed.to_le_bytes());
        hasher.update(self.trial.to_le_bytes());
        hasher.update((self.label.len() as u64).to_le_bytes());
        hasher.update(self.label.as_bytes());
        let digest = hasher.finalize();
        let mut seed = [0u8; 32];
        seed.copy_from_slice(&digest);
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(index);
        rng
    }
}
