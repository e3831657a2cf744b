//! Seeded spectral-parameter samples.
//!
//! All samples come from a ChaCha8 stream seeded with the caller's seed, so a
//! report is reproducible from `(seed, count)` alone.  Points lie in the
//! annulus `0.2 < |μ| < 5`, log-uniform in modulus and uniform in argument.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const R_MIN: f64 = 0.2;
pub const R_MAX: f64 = 5.0;
pub const POLE_EXCLUSION: f64 = 1e-3;

pub struct MuSampler {
    rng: ChaCha8Rng,
}

impl MuSampler {
    pub fn new(seed: u64) -> Self {
        MuSampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_mu(&mut self) -> Complex64 {
        let r = (self.rng.gen_range(R_MIN.ln()..R_MAX.ln())).exp();
        let theta = self.rng.gen_range(0.0..2.0 * PI);
        Complex64::from_polar(r, theta)
    }

    /// Next sample at distance at least `POLE_EXCLUSION` from every pole.
    pub fn next_mu_avoiding(&mut self, poles: &[Complex64]) -> Complex64 {
        loop {
            let mu = self.next_mu();
            if poles.iter().all(|p| (mu - p).norm() > POLE_EXCLUSION) {
                return mu;
            }
        }
    }

    pub fn next_real(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn next_complex_in_box(&mut self, half_width: f64) -> Complex64 {
        Complex64::new(self.rng.gen_range(-half_width..half_width), self.rng.gen_range(-half_width..half_width))
    }
}

pub fn near_any(mu: Complex64, poles: &[Complex64]) -> bool {
    poles.iter().any(|p| (mu - p).norm() <= POLE_EXCLUSION)
}
