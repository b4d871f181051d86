//! Splittable counter-based pseudorandom generator.
//!
//! All randomness in the toolkit flows from one 64-bit seed through this
//! generator so that witnesses and sampled objects are reproducible across
//! runs, platforms and implementations. The algorithm is fixed:
//!
//! output(i) = mix(seed + (i+1) * 0x9E3779B97F4A7C15)
//!
//! where `mix` is the SplitMix64 finalizer
//! (z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
//!  z *= 0x94D049BB133111EB; z ^= z >> 31).
//!
//! Child streams are derived by `split(tag)`, which reseeds with
//! mix(seed ^ mix(tag)), so sibling streams never share outputs.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    seed: u64,
    counter: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { seed, counter: 0 }
    }

    /// Derive an independent child stream. Deterministic in (seed, tag).
    pub fn split(&self, tag: u64) -> SplitMix64 {
        SplitMix64 { seed: mix(self.seed ^ mix(tag.wrapping_add(GOLDEN))), counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        mix(self.seed.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform draw in [0, bound) by rejection, so there is no modulo bias.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below(0)");
        if bound.is_power_of_two() {
            return self.next_u64() & (bound - 1);
        }
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform draw in [lo, hi] inclusive.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.below(hi - lo + 1)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }
}
