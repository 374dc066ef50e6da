//! Counter-based random streams. Every simulated path owns the stream
//! `(seed, path_index)`, so results do not depend on how paths are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent generator for path `stream` under master `seed`.
pub fn path_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Exponential variate with the given rate by inverse CDF.
#[inline]
pub fn exponential<R: Rng + ?Sized>(rng: &mut R, rate: f64) -> f64 {
    let u: f64 = rng.random();
    -(-u).ln_1p() / rate
}

/// Uniform on `[0, 1)`.
#[inline]
pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random()
}

/// Standard normal variate.
#[inline]
pub fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(rand_distr::StandardNormal)
}

/// Poisson count by sequential inversion. Adequate for means up to a few
/// hundred, which covers every horizon used here.
pub fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    if mean > 500.0 {
        let d = rand_distr::Poisson::new(mean).expect("finite positive mean");
        return rng.sample(d) as u64;
    }
    let u: f64 = rng.random();
    let mut p = (-mean).exp();
    let mut cdf = p;
    let mut k = 0u64;
    while u >= cdf {
        k += 1;
        p *= mean / k as f64;
        cdf += p;
        if p < 1e-300 && k as f64 > mean {
            break;
        }
    }
    k
}
