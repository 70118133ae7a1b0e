//! Counter-based random values keyed by `(seed, index, stream)`.
//!
//! Every draw is a pure function of its key, so noise fields do not depend
//! on iteration order. The mixer is the SplitMix64 finalizer applied three
//! times, once per key component; its output is fixed by this definition and
//! identical on every platform.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub(crate) fn new(seed: u64) -> Self {
        CounterRng {
            key: splitmix64(seed),
        }
    }

    #[inline]
    pub(crate) fn bits(&self, index: u64, stream: u64) -> u64 {
        splitmix64(splitmix64(self.key ^ index) ^ stream.wrapping_mul(GOLDEN))
    }

    /// Uniform in the open interval `(0, 1)`; never 0, so `ln` is safe.
    #[inline]
    pub(crate) fn uniform(&self, index: u64, stream: u64) -> f64 {
        ((self.bits(index, stream) >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}
