//! Uniform points on `dB_r`, drawn as normalized 4D standard normals.
//!
//! The generator is ChaCha8 with a 64-bit seed. Each `stream_index` selects
//! an independent ChaCha stream, and the stream is cut into chunks of
//! [`CHUNK_SAMPLES`] points; chunk `c` starts at word position `c << 32`, so
//! any chunk can be regenerated without touching the others.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::Quaternion;

/// Number of accepted samples per deterministic chunk.
pub const CHUNK_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSampler {
    pub radius: f64,
    pub seed: u64,
    pub stream_index: u64,
}

impl SphereSampler {
    pub fn new(radius: f64, seed: u64, stream_index: u64) -> Self {
        SphereSampler {
            radius,
            seed,
            stream_index,
        }
    }

    /// RNG positioned at the start of chunk `chunk`.
    pub fn chunk_rng(&self, chunk: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng.set_word_pos((chunk as u128) << 32);
        rng
    }

    /// Next point on the sphere from `rng`.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> Quaternion {
        loop {
            let g = Quaternion::new(
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
            );
            let n = g.norm();
            // Practically unreachable, but a zero vector has no direction.
            if n > 1e-300 {
                return g * (self.radius / n);
            }
        }
    }

    /// The first `n` points of the stream, chunk by chunk.
    pub fn sample(&self, n: usize) -> Vec<Quaternion> {
        let mut out = Vec::with_capacity(n);
        let mut chunk = 0u64;
        while out.len() < n {
            let mut rng = self.chunk_rng(chunk);
            let take = CHUNK_SAMPLES.min(n - out.len());
            for _ in 0..take {
                out.push(self.draw(&mut rng));
            }
            chunk += 1;
        }
        out
    }
}
