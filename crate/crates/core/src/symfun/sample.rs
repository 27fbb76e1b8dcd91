use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{normalized_hs, CurvatureVector};
use crate::{Error, Result};

const MAX_ATTEMPTS: usize = 10_000;
/// Probability of flipping one entry negative before the cone test.
const NEGATIVE_PROBABILITY: f64 = 0.5;

/// Draws curvature vectors with `H_1, ..., H_p > 0`.
///
/// Base draws are positive with a random overall scale; with probability
/// one half one entry is replaced by a negative value and the draw is
/// rejected unless it stays in the cone.
#[derive(Debug, Clone)]
pub struct GardingSampler {
    m: usize,
    p: usize,
    rng: ChaCha8Rng,
}

impl GardingSampler {
    pub fn new(m: usize, p: usize, seed: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidVector("need at least two entries"));
        }
        if p == 0 || p > m {
            return Err(Error::OrderOutOfRange { k: p, max: m });
        }
        Ok(Self { m, p, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn sample(&mut self) -> Result<CurvatureVector> {
        for _ in 0..MAX_ATTEMPTS {
            let scale = libm_pow10(self.rng.gen_range(-1.0..1.0));
            let mut values: alloc::vec::Vec<f64> = (0..self.m)
                .map(|_| scale * self.rng.gen_range(0.05..2.0))
                .collect();
            if self.rng.gen_bool(NEGATIVE_PROBABILITY) {
                let idx = self.rng.gen_range(0..self.m);
                let rest: f64 = values.iter().enumerate().filter(|&(i, _)| i != idx).map(|(_, v)| v).sum();
                values[idx] = -self.rng.gen_range(0.0..1.0) * rest;
            }
            let hs = normalized_hs(&CurvatureVector { values: values.clone() });
            if hs[1..=self.p].iter().all(|&h| h > 0.0) {
                return Ok(CurvatureVector { values });
            }
        }
        Err(Error::SamplingExhausted { attempts: MAX_ATTEMPTS })
    }
}

fn libm_pow10(x: f64) -> f64 {
    num_traits::Float::powf(10.0, x)
}

/// One vector from the cone `H_1..H_p > 0`, deterministic in `seed`.
pub fn garding_sample(m: usize, p: usize, seed: u64) -> Result<CurvatureVector> {
    GardingSampler::new(m, p, seed)?.sample()
}
