//! Reproducible, splittable random streams.
//!
//! A stream is the ChaCha20 keystream keyed by `seed` with stream number
//! `stream_id`. Distinct ids give non-overlapping keystreams, and a given
//! `(seed, stream_id)` produces the same sequence on every platform.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha20Rng,
}

pub fn rng_stream(seed: u64, stream_id: u64) -> RngStream {
    let mut inner = ChaCha20Rng::seed_from_u64(seed);
    inner.set_stream(stream_id);
    RngStream { inner }
}

impl RngStream {
    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform on `(0, 1)`; never returns zero, so it is safe under `ln`.
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u = self.uniform();
            if u > 0.0 {
                return u;
            }
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
