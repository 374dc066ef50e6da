use rand::Rng;
use serde::Serialize;

use super::{Direction, OptionKind, SpreadSpec, VanillaModel, VanillaSpec};
use crate::bipoisson::sample_counts;
use crate::error::{domain, Result};
use crate::models::{GouLeg, GouMarket, MertonLeg, MertonMarket, TwoLegMarket};
use crate::rng::{path_rng, poisson, std_normal};

const MIN_PATHS: usize = 1000;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n_paths: usize,
}

/// Welford accumulator.
#[derive(Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn finish(&self, scale: f64) -> McEstimate {
        let var = if self.n > 1 { self.m2 / (self.n - 1) as f64 } else { 0.0 };
        McEstimate {
            estimate: scale * self.mean,
            std_error: scale * (var / self.n as f64).sqrt(),
            n_paths: self.n,
        }
    }
}

/// Pair of standard normals with correlation `rho`.
fn correlated<R: Rng + ?Sized>(rho: f64, rng: &mut R) -> (f64, f64) {
    let z1 = std_normal(rng);
    let z2 = rho * z1 + (1.0 - rho * rho).max(0.0).sqrt() * std_normal(rng);
    (z1, z2)
}

/// Markets whose terminal prices can be drawn exactly given jump counts.
pub trait PathModel: TwoLegMarket {
    /// Terminal prices `(S1(T), S2(T))` given `N1(T) = n1`, `N2(T) = n2`,
    /// built from the diffusion and individual jump-size laws.
    fn terminal(&self, counts: (usize, usize), t: f64, rng: &mut dyn rand::RngCore) -> Result<(f64, f64)>;

    /// Rate used to discount terminal payoffs.
    fn rate(&self) -> f64;
}

fn merton_terminal(leg: &MertonLeg, r: f64, n: usize, t: f64, z: f64, zeta: f64) -> f64 {
    let drift = (r - leg.lambda * (leg.jump_m - 1.0) - 0.5 * leg.sigma * leg.sigma) * t;
    let jumps = n as f64 * (leg.jump_m.ln() - 0.5 * leg.jump_nu * leg.jump_nu) + (n as f64).sqrt() * leg.jump_nu * zeta;
    leg.s0 * (drift + leg.sigma * t.sqrt() * z + jumps).exp()
}

fn gou_terminal(leg: &GouLeg, n: usize, t: f64, z: f64, zeta: f64) -> Result<f64> {
    let decay = (-leg.k * t).exp();
    let u = leg.ou_variance(t).sqrt() * z + decay * (n as f64 * leg.jump_m + (n as f64).sqrt() * leg.jump_nu * zeta);
    Ok(leg.fwd.value(t)? * (u + leg.h(t)).exp())
}

impl PathModel for MertonMarket {
    fn terminal(&self, (n1, n2): (usize, usize), t: f64, rng: &mut dyn rand::RngCore) -> Result<(f64, f64)> {
        let (z1, z2) = correlated(self.rho_w, rng);
        let (d1, d2) = correlated(self.rho_d, rng);
        Ok((
            merton_terminal(&self.leg1, self.r, n1, t, z1, d1),
            merton_terminal(&self.leg2, self.r, n2, t, z2, d2),
        ))
    }

    fn rate(&self) -> f64 {
        self.r
    }
}

impl PathModel for GouMarket {
    fn terminal(&self, (n1, n2): (usize, usize), t: f64, rng: &mut dyn rand::RngCore) -> Result<(f64, f64)> {
        let (l1, l2) = (&self.leg1, &self.leg2);
        // Exact covariance of the two OU integrals.
        let ks = l1.k + l2.k;
        let cov = self.rho_w * l1.sigma * l2.sigma * -(-ks * t).exp_m1() / ks;
        let (v1, v2) = (l1.ou_variance(t), l2.ou_variance(t));
        let rho = if v1 > 0.0 && v2 > 0.0 { (cov / (v1 * v2).sqrt()).clamp(-1.0, 1.0) } else { 0.0 };
        let (z1, z2) = correlated(rho, rng);
        let (d1, d2) = correlated(self.rho_d, rng);
        Ok((gou_terminal(l1, n1, t, z1, d1)?, gou_terminal(l2, n2, t, z2, d2)?))
    }

    fn rate(&self) -> f64 {
        self.r
    }
}

/// Monte Carlo value of the zero-strike spread. Path `i` uses the stream
/// `(seed, i)`, so the estimate depends only on `(seed, n_paths)`.
pub fn mc_spread<M: PathModel>(
    market: &M,
    spec: &SpreadSpec,
    direction: Direction,
    n_paths: usize,
    seed: u64,
) -> Result<McEstimate> {
    if n_paths < MIN_PATHS {
        return domain(format!("at least {MIN_PATHS} paths are required, got {n_paths}"));
    }
    if spec.strike != 0.0 || !(spec.maturity > 0.0) {
        return domain("spread needs zero strike and positive maturity");
    }
    let t = spec.maturity;
    let pair = market.jump_pair();
    let mut acc = Moments::default();
    for i in 0..n_paths {
        let mut rng = path_rng(seed, i as u64);
        let counts = sample_counts(&pair, t, &mut rng)?;
        let (s1, s2) = market.terminal(counts, t, &mut rng)?;
        acc.push(match direction {
            Direction::FirstOverSecond => (s1 - s2).max(0.0),
            Direction::SecondOverFirst => (s2 - s1).max(0.0),
        });
    }
    Ok(acc.finish((-market.rate() * t).exp()))
}

/// Draws `S(T)` for one leg; `b` is the Schwartz–Smith compensator.
fn vanilla_terminal(model: VanillaModel<'_>, r: f64, t: f64, b: f64, rng: &mut dyn rand::RngCore) -> Result<f64> {
    match model {
        VanillaModel::Merton(leg) => {
            let n = poisson(rng, leg.lambda * t) as usize;
            let z = std_normal(rng);
            Ok(merton_terminal(leg, r, n, t, z, std_normal(rng)))
        }
        VanillaModel::Gou(leg) => {
            let n = poisson(rng, leg.lambda * t) as usize;
            let z = std_normal(rng);
            gou_terminal(leg, n, t, z, std_normal(rng))
        }
        VanillaModel::Ss(mk) => {
            let (n1, n2) = sample_counts(&mk.jumps, t, rng)?;
            let k = mk.k;
            let v1 = mk.sigma1 * mk.sigma1 * -(-2.0 * k * t).exp_m1() / (2.0 * k);
            let v2 = mk.sigma2 * mk.sigma2 * t;
            let cov = mk.rho * mk.sigma1 * mk.sigma2 * -(-k * t).exp_m1() / k;
            let rho = if v1 > 0.0 && v2 > 0.0 { (cov / (v1 * v2).sqrt()).clamp(-1.0, 1.0) } else { 0.0 };
            let (z1, z2) = correlated(rho, rng);
            let decay = (-k * t).exp();
            let mut u = v1.sqrt() * z1 + mk.mu * t + v2.sqrt() * z2;
            for _ in 0..n1 {
                u += decay * (mk.jump_m + mk.jump_nu * std_normal(rng));
            }
            for _ in 0..n2 {
                u += mk.jump_m + mk.jump_nu * std_normal(rng);
            }
            Ok(mk.fwd.value(t)? * (u - mk.a(t) - b).exp())
        }
    }
}

fn ss_compensator(model: VanillaModel<'_>, t: f64, tail_tol: f64) -> Result<f64> {
    match model {
        VanillaModel::Ss(mk) => mk.b(t, tail_tol),
        _ => Ok(0.0),
    }
}

/// Monte Carlo value of a vanilla option, discounted at `r`.
pub fn mc_vanilla(
    model: VanillaModel<'_>,
    r: f64,
    spec: &VanillaSpec,
    n_paths: usize,
    seed: u64,
    tail_tol: f64,
) -> Result<McEstimate> {
    if n_paths < MIN_PATHS {
        return domain(format!("at least {MIN_PATHS} paths are required, got {n_paths}"));
    }
    let t = spec.maturity;
    let b = ss_compensator(model, t, tail_tol)?;
    let mut acc = Moments::default();
    for i in 0..n_paths {
        let s = vanilla_terminal(model, r, t, b, &mut path_rng(seed, i as u64))?;
        acc.push(match spec.kind {
            OptionKind::Call => (s - spec.strike).max(0.0),
            OptionKind::Put => (spec.strike - s).max(0.0),
        });
    }
    Ok(acc.finish((-r * t).exp()))
}

/// Monte Carlo estimate of the undiscounted `E[S(T)]`.
pub fn mc_forward(model: VanillaModel<'_>, r: f64, t: f64, n_paths: usize, seed: u64, tail_tol: f64) -> Result<McEstimate> {
    if n_paths < MIN_PATHS {
        return domain(format!("at least {MIN_PATHS} paths are required, got {n_paths}"));
    }
    if !(t > 0.0) {
        return domain(format!("horizon must be positive, got {t}"));
    }
    let b = ss_compensator(model, t, tail_tol)?;
    let mut acc = Moments::default();
    for i in 0..n_paths {
        acc.push(vanilla_terminal(model, r, t, b, &mut path_rng(seed, i as u64))?);
    }
    Ok(acc.finish(1.0))
}
