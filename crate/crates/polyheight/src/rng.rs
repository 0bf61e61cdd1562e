//! Tiny deterministic PRNG (splitmix64) so sampled output is bit-stable
//! across platforms and independent of external crates.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, n).
    pub fn next_below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Uniform integer in [lo, hi] inclusive.
    pub fn next_range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        lo + (self.next_below((hi - lo + 1) as u64) as i64)
    }

    /// Derives an independent stream for a labelled sub-task.
    pub fn fork(&self, label: u64) -> SplitMix64 {
        let mut g = SplitMix64::new(self.state ^ label.wrapping_mul(0xA076_1D64_78BD_642F));
        g.next_u64();
        g
    }
}
