//! Seeded generator used by every randomized construction and property suite.
//!
//! This is SplitMix64 (Steele, Lea, Flood 2014): state advances by the odd
//! constant 0x9E3779B97F4A7C15 and output is the xor-shift-multiply finalizer
//! with constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB. The algorithm is
//! pinned here, rather than borrowed from a crate, so that fixtures derived
//! from a seed can be reproduced bit-for-bit in any language.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform value in [0, bound) by rejection sampling.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Derive an independent child stream; used to shard property suites.
    pub fn fork(&mut self) -> SplitMix64 {
        SplitMix64::new(self.next_u64())
    }
}
