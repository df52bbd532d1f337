//! Seeded random streams.
//!
//! A [`SeedSpec`] `(seed, stream)` is expanded into a ChaCha8 key; the ChaCha
//! stream id then selects a chunk. ChaCha is counter based, so chunk `c` of a
//! given `(seed, stream)` is always the same sequence no matter which thread
//! produces it or in which order chunks run.
//!
//! Normal and gamma variates are generated here rather than through
//! `rand_distr` so that the bit patterns stay fixed across dependency updates.

use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct SeedSpec {
    pub seed: u64,
    #[serde(default)]
    pub stream: u64,
}

impl SeedSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        SeedSpec { seed, stream }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// First half of the key comes from `seed`, second half from `stream`; the
/// first splitmix output is a bijection of its input, so distinct `SeedSpec`s
/// get distinct keys.
fn derive_key(seed: SeedSpec) -> [u8; 32] {
    let mut seed_state = seed.seed;
    let mut stream_state = seed.stream ^ 0xD1B5_4A32_D192_ED03;
    let words = [
        splitmix64(&mut seed_state),
        splitmix64(&mut seed_state),
        splitmix64(&mut stream_state),
        splitmix64(&mut stream_state),
    ];
    let mut key = [0u8; 32];
    for (chunk, word) in key.chunks_mut(8).zip(words) {
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    key
}

/// A deterministic source of uniform, normal and gamma variates.
#[derive(Debug, Clone)]
pub struct SampleStream {
    rng: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl SampleStream {
    pub fn new(seed: SeedSpec) -> Self {
        Self::for_chunk(seed, 0)
    }

    /// Stream for chunk `chunk` of a Monte Carlo run.
    pub fn for_chunk(seed: SeedSpec, chunk: u64) -> Self {
        let mut rng = ChaCha8Rng::from_seed(derive_key(seed));
        rng.set_stream(chunk);
        SampleStream { rng, spare_normal: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal by Box–Muller; the second variate of each pair is cached.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let r = (-2.0 * self.uniform().ln()).sqrt();
        let theta = 2.0 * PI * self.uniform();
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Gamma(shape, 1) by Marsaglia–Tsang; shapes below one are boosted with
    /// `G(shape + 1) * U^{1/shape}`.
    pub fn gamma(&mut self, shape: f64) -> f64 {
        debug_assert!(shape > 0.0);
        if shape < 1.0 {
            let g = self.gamma(shape + 1.0);
            return g * self.uniform().powf(1.0 / shape);
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.normal();
            let v = 1.0 + c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = self.uniform();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }
}
