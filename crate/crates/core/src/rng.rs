//! Seeded, portable random streams.
//!
//! A stream is a (seed, stream id) pair mapped onto a ChaCha12 generator, so
//! equal pairs draw identical sequences on every platform. Parallel work
//! derives disjoint child streams instead of sharing one generator.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Child stream keyed by `tag`. Children of distinct tags, and of distinct
    /// parents, land on distinct stream ids with overwhelming probability.
    pub fn substream(&self, tag: u64) -> RngStream {
        let mixed = splitmix64(
            self.stream_id
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add(tag)
                .wrapping_add(1),
        );
        RngStream {
            seed: self.seed,
            stream_id: mixed,
        }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
