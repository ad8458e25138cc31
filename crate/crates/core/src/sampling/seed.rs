use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Identifies one reproducible random stream.
///
/// The generator is ChaCha8 keyed by four consecutive SplitMix64 outputs
/// started from `master_seed`, with its 64-bit stream counter set to
/// `stream_index`. The first SplitMix64 output is a bijection of the seed and
/// ChaCha streams under one key never overlap, so distinct
/// `(master_seed, stream_index)` pairs give distinct generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub const fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut state = self.master_seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream_index);
        rng
    }

    /// Derives an independent sub-stream, e.g. one per trial or per matrix.
    ///
    /// The child's master seed hashes both parent fields, so children of
    /// different parents collide only with probability ~2⁻⁶⁴.
    pub fn child(&self, index: u64) -> SeedSpec {
        let mut s = self.stream_index ^ GOLDEN_GAMMA;
        let h = splitmix64(&mut s);
        let mut m = self.master_seed ^ h;
        SeedSpec::new(splitmix64(&mut m), index)
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
