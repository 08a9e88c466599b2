//! Seeded generator used by every randomized audit.
//!
//! xorshift64* with the state seeded through one SplitMix64 step, so that a
//! port in another language reproduces the same sample sequence:
//!
//! ```text
//! seed:    z = seed + 0x9E3779B97F4A7C15
//!          z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!          z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!          state = z ^ (z >> 31), or 0x9E3779B97F4A7C15 if that is 0
//! step:    x ^= x >> 12; x ^= x << 25; x ^= x >> 27
//!          output = x * 0x2545F4914F6CDD1D
//! below(n): draw outputs until one is < 2^64 - (2^64 mod n), return it mod n
//! ```
//!
//! All arithmetic is wrapping on 64-bit words.

#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        Rng { state: if z == 0 { 0x9E37_79B9_7F4A_7C15 } else { z } }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = u64::MAX - (u64::MAX % n + 1) % n;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return v % n;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.below(n as u64) as usize
    }

    /// Random subset where each of `0..n` is kept with probability 1/2.
    pub fn subset(&mut self, n: usize) -> Vec<usize> {
        (0..n).filter(|_| self.next_u64() >> 63 == 1).collect()
    }
}
