//! Pinned pseudo-random streams.
//!
//! Everything random in this crate is driven by the splitmix64 step function so
//! that a seed reproduces the same graphs and percolation configurations on any
//! platform, independently of external RNG crates.

/// Golden-ratio increment of splitmix64.
pub const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// The splitmix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Maps a 64-bit word to a uniform double in [0, 1) using its top 53 bits.
#[inline]
pub fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Derives an independent 64-bit key from a seed and a stream index.
#[inline]
pub fn derive(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(GAMMA.wrapping_mul(index.wrapping_add(1))))
}

/// Uniform draw attached to `(seed, trial, item)`. Percolation uses this per edge so
/// that every p sees the same underlying uniforms (monotone coupling).
#[inline]
pub fn keyed_uniform(seed: u64, trial: u64, item: u64) -> f64 {
    unit_f64(derive(derive(seed, trial), item))
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        unit_f64(self.next_u64())
    }

    /// Uniform integer in `0..bound` by rejection of the biased tail.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let limit = bound * (u64::MAX / bound);
        loop {
            let x = self.next_u64();
            if x < limit {
                return x % bound;
            }
        }
    }

    /// Fisher-Yates, from the back.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
