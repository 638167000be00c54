use rand::Rng;
use rand_distr::{Distribution, Gamma, Geometric, Poisson};

use crate::pgf::Params;

/// Below this many geometric summands the total is drawn term by term.
pub const DIRECT_LIMIT: u64 = 64;

/// Offspring sampler for `P(K = k) = binom(k+r-1, k) p^r (1-p)^k`.
///
/// The total offspring of `z` individuals is negative binomial with shape
/// `r z` and the same `p`; small shapes are summed from geometric draws and
/// large ones use the gamma-Poisson mixture, which has the same law.
#[derive(Debug, Clone)]
pub struct NbSampler {
    r: u32,
    p: f64,
    geometric: Geometric,
}

impl NbSampler {
    pub fn new(params: &Params<f64>) -> Self {
        let p = params.nb_success();
        NbSampler {
            r: params.r(),
            p,
            geometric: Geometric::new(p).expect("0 < p < 1 for valid params"),
        }
    }

    pub fn success(&self) -> f64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// One individual's offspring count.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.total(1, rng)
    }

    /// Total offspring of `z` individuals.
    pub fn total<R: Rng + ?Sized>(&self, z: u64, rng: &mut R) -> u64 {
        let shape = z.saturating_mul(self.r as u64);
        if shape <= DIRECT_LIMIT {
            (0..shape).map(|_| self.geometric.sample(rng)).sum()
        } else {
            let scale = (1.0 - self.p) / self.p;
            let lambda = Gamma::new(shape as f64, scale)
                .expect("positive shape and scale")
                .sample(rng);
            if lambda <= 0.0 {
                return 0;
            }
            Poisson::new(lambda).expect("finite positive rate").sample(rng) as u64
        }
    }
}

/// Draw one offspring count.
pub fn sample_offspring<R: Rng + ?Sized>(params: &Params<f64>, rng: &mut R) -> u64 {
    NbSampler::new(params).sample(rng)
}
