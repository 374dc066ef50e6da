use rand::Rng;

use super::{Dependence, DependenceParams, JumpPair};
use crate::error::{domain, Result};
use crate::rng::{exponential, uniform};

/// Arrival times of `N1` (`t1`) and `N2` (`t2`) up to a horizon.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EventTimePair {
    pub t1: Vec<f64>,
    pub t2: Vec<f64>,
}

impl EventTimePair {
    pub fn counts(&self) -> (usize, usize) {
        (self.t1.len(), self.t2.len())
    }
}

/// Draws one path of the self-decomposable pair on `[0, horizon]`.
///
/// With `Y_k, Z_k ~ Exp(λ2)` and `P{B_k = 0} = a`, the `N2` inter-arrivals are
/// `X_k = a Y_k + B_k Z_k` and the `N1` inter-arrivals are `(λ2/λ1) Y_k`.
pub fn sample_pair<R: Rng + ?Sized>(
    params: &DependenceParams,
    horizon: f64,
    rng: &mut R,
) -> Result<EventTimePair> {
    if !(horizon > 0.0) {
        return domain(format!("horizon must be positive, got {horizon}"));
    }
    let DependenceParams { lambda1, lambda2, a } = *params;
    let scale = lambda2 / lambda1;
    let mut out = EventTimePair::default();
    let (mut s, mut t) = (0.0, 0.0);
    while s <= horizon || t <= horizon {
        let y = exponential(rng, lambda2);
        let z = exponential(rng, lambda2);
        let b = if uniform(rng) < a { 0.0 } else { 1.0 };
        s += scale * y;
        t += a * y + b * z;
        if s <= horizon {
            out.t1.push(s);
        }
        if t <= horizon {
            out.t2.push(t);
        }
    }
    Ok(out)
}

fn poisson_times<R: Rng + ?Sized>(rate: f64, horizon: f64, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::new();
    if rate <= 0.0 {
        return out;
    }
    let mut s = exponential(rng, rate);
    while s <= horizon {
        out.push(s);
        s += exponential(rng, rate);
    }
    out
}

fn merge(a: Vec<f64>, b: &[f64]) -> Vec<f64> {
    let mut v = a;
    v.extend_from_slice(b);
    v.sort_by(f64::total_cmp);
    v
}

/// Arrival times for any coupling.
pub fn sample_events<R: Rng + ?Sized>(
    pair: &JumpPair,
    horizon: f64,
    rng: &mut R,
) -> Result<EventTimePair> {
    if !(horizon > 0.0) {
        return domain(format!("horizon must be positive, got {horizon}"));
    }
    pair.validate()?;
    let (l1, l2) = (pair.lambda1, pair.lambda2);
    match pair.dependence {
        Dependence::Independent => Ok(EventTimePair {
            t1: poisson_times(l1, horizon, rng),
            t2: poisson_times(l2, horizon, rng),
        }),
        Dependence::Common { lambda } => {
            let shared = poisson_times(lambda, horizon, rng);
            let t1 = merge(poisson_times(l1 - lambda, horizon, rng), &shared);
            let t2 = merge(poisson_times(l2 - lambda, horizon, rng), &shared);
            Ok(EventTimePair { t1, t2 })
        }
        Dependence::Cointegrated { a } => {
            if l1 == 0.0 || l2 == 0.0 {
                return Ok(EventTimePair {
                    t1: poisson_times(l1, horizon, rng),
                    t2: poisson_times(l2, horizon, rng),
                });
            }
            sample_pair(&DependenceParams { lambda1: l1, lambda2: l2, a }, horizon, rng)
        }
    }
}

/// Jump counts `(N1(t), N2(t))` for any coupling.
pub fn sample_counts<R: Rng + ?Sized>(pair: &JumpPair, t: f64, rng: &mut R) -> Result<(usize, usize)> {
    sample_events(pair, t, rng).map(|e| e.counts())
}
