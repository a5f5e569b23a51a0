//! Seeded deterministic random number generation.
//!
//! The generator is xoshiro256++ (Blackman & Vigna), seeded through a
//! splitmix64 chain. Both algorithms are fixed by this module and produce the
//! same 64-bit stream for the same seed on every platform, which is what makes
//! sweep output reproducible byte for byte. Floating-point helpers derive from
//! that integer stream; `sqrt` is IEEE-exact everywhere, `ln` may differ in
//! the last ulp between libm implementations, so only the SR-BSC paths (which
//! compare uniforms against thresholds) are guaranteed bit-identical across
//! platforms.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One step of the splitmix64 output function.
#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent child seed from a base seed and a stream index.
///
/// Used to hand each Monte Carlo trial (and each draw stream within a trial)
/// its own generator without consuming the parent stream.
pub fn fork_seed(seed: u64, stream: u64) -> u64 {
    let mut state = seed;
    let a = splitmix64(&mut state);
    let mut state = a ^ stream.wrapping_mul(GOLDEN_GAMMA);
    splitmix64(&mut state)
}

/// Deterministic xoshiro256++ generator.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    s: [u64; 4],
}

impl Rng {
    /// Build a generator from a 64-bit seed via a splitmix64 chain.
    pub fn from_seed(seed: u64) -> Self {
        let mut state = seed;
        let mut s = [0u64; 4];
        for w in &mut s {
            *w = splitmix64(&mut state);
        }
        if s == [0, 0, 0, 0] {
            s[0] = 1;
        }
        Rng { seed, s }
    }

    /// Child generator for the given stream index; does not disturb `self`.
    pub fn fork(&self, stream: u64) -> Self {
        Rng::from_seed(fork_seed(self.seed, stream))
    }

    /// The seed this generator was constructed from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.s;
        let result = s[0]
            .wrapping_add(s[3])
            .rotate_left(23)
            .wrapping_add(s[0]);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform in [0, 1) with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        // rejection sampling to avoid modulo bias
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Standard normal via the Marsaglia polar method (second value of each
    /// pair is discarded so the draw count stays a pure function of the
    /// stream position).
    pub fn normal(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }
}
