use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

use super::Complex;
use crate::error::{Error, Result};

/// Seeded, splittable random stream.
///
/// Every `(seed, stream_id)` pair selects one of 2^64 independent ChaCha8
/// streams under the same key, so workers can each own a stream and still
/// reproduce the sequential result exactly. The ChaCha8 stream only supplies
/// the 256-bit state of a xoshiro256++ generator, which produces the samples.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: Xoshiro256PlusPlus,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut key = ChaCha8Rng::seed_from_u64(seed);
        key.set_stream(stream_id);
        let mut state = [0u8; 32];
        key.fill_bytes(&mut state);
        Self {
            seed,
            stream_id,
            inner: Xoshiro256PlusPlus::from_seed(state),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Returns a fresh stream with the same seed and a different id.
    pub fn split(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Uniform index in `0..n`.
    pub fn pick(&mut self, n: usize) -> usize {
        if n.is_power_of_two() {
            (self.inner.next_u64() as usize) & (n - 1)
        } else {
            self.inner.random_range(0..n)
        }
    }

    pub fn bit(&mut self) -> u8 {
        (self.inner.next_u32() & 1) as u8
    }

    pub fn fill_bits(&mut self, out: &mut [u8]) {
        for b in out {
            *b = self.bit();
        }
    }

    /// Circularly-symmetric complex Gaussian with total variance `variance`.
    /// No validation; see [`sample_cn`] for the checked form.
    #[inline]
    pub fn complex_normal(&mut self, variance: f64) -> Complex {
        let s = (0.5 * variance).sqrt();
        Complex::new(s * self.standard_normal(), s * self.standard_normal())
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

/// Draws `z ~ CN(0, variance)`: independent real and imaginary parts, each
/// `N(0, variance / 2)`.
pub fn sample_cn(rng: &mut RngStream, variance: f64) -> Result<Complex> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(Error::NonPositiveVariance(variance));
    }
    Ok(rng.complex_normal(variance))
}

/// Stream id for one Monte Carlo trial: the SNR index occupies the top 24
/// bits and the trial index the low 40.
pub fn trial_stream_id(snr_index: usize, trial: u64) -> u64 {
    debug_assert!(trial < (1 << 40));
    ((snr_index as u64) << 40) | trial
}
