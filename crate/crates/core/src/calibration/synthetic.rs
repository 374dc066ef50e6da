use chrono::NaiveDate;
use rand::Rng;

use super::density::Theta;
use super::series::{PriceSeries, Seasonality};
use crate::bipoisson::{step_probs, JumpPair};
use crate::error::{domain, Result};
use crate::rng::{std_normal, uniform};

/// Euler path of `U(t + Δt) = (1 − kΔt)U(t) + σ√Δt ε + e^{−kΔt} 1 Y` with a
/// Bernoulli(`λΔt`) jump indicator and `Y ~ N(M, ν²)`, started at zero.
pub fn simulate_euler<R: Rng + ?Sized>(theta: &Theta, steps: usize, dt: f64, rng: &mut R) -> Result<Vec<f64>> {
    if !(theta.lambda * dt <= 1.0) {
        return domain(format!("jump probability λΔt = {} exceeds one", theta.lambda * dt));
    }
    let mut u = Vec::with_capacity(steps + 1);
    u.push(0.0);
    let (phi, sd, decay) = (1.0 - theta.k * dt, theta.sigma * dt.sqrt(), (-theta.k * dt).exp());
    for i in 0..steps {
        let mut next = phi * u[i] + sd * std_normal(rng);
        if uniform(rng) < theta.lambda * dt {
            next += decay * (theta.jump_m + theta.jump_nu * std_normal(rng));
        }
        u.push(next);
    }
    Ok(u)
}

/// Joint Euler paths whose jump indicators follow the small-step law of
/// `jumps`, with diffusion correlation `rho_w` and jump-size correlation
/// `rho_d` on common jump steps.
#[allow(clippy::too_many_arguments)]
pub fn simulate_pair_euler<R: Rng + ?Sized>(
    thetas: (&Theta, &Theta),
    rho_w: f64,
    rho_d: f64,
    jumps: &JumpPair,
    steps: usize,
    dt: f64,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (t1, t2) = thetas;
    if (jumps.lambda1 - t1.lambda).abs() > 1e-12 || (jumps.lambda2 - t2.lambda).abs() > 1e-12 {
        return domain("jump intensities must match the marginal parameters");
    }
    let probs = step_probs(jumps, dt)?;
    let mut u1 = vec![0.0; steps + 1];
    let mut u2 = vec![0.0; steps + 1];
    let d1 = (-t1.k * dt).exp();
    let d2 = (-t2.k * dt).exp();
    let corr = |rho: f64, rng: &mut R| {
        let z1 = std_normal(rng);
        (z1, rho * z1 + (1.0 - rho * rho).sqrt() * std_normal(rng))
    };
    for i in 0..steps {
        let (e1, e2) = corr(rho_w, rng);
        let (y1, y2) = corr(rho_d, rng);
        let v = uniform(rng);
        let (j1, j2) = if v < probs.p11 {
            (true, true)
        } else if v < probs.p11 + probs.p10 {
            (true, false)
        } else if v < probs.p11 + probs.p10 + probs.p01 {
            (false, true)
        } else {
            (false, false)
        };
        u1[i + 1] = (1.0 - t1.k * dt) * u1[i] + t1.sigma * dt.sqrt() * e1;
        u2[i + 1] = (1.0 - t2.k * dt) * u2[i] + t2.sigma * dt.sqrt() * e2;
        if j1 {
            u1[i + 1] += d1 * (t1.jump_m + t1.jump_nu * y1);
        }
        if j2 {
            u2[i + 1] += d2 * (t2.jump_m + t2.jump_nu * y2);
        }
    }
    Ok((u1, u2))
}

/// Daily prices `exp(s(d) + u)` starting at `start`.
pub fn price_series_from(start: NaiveDate, u: &[f64], seasonal: &Seasonality) -> Result<PriceSeries> {
    let dates: Vec<NaiveDate> = start.iter_days().take(u.len()).collect();
    let prices = dates.iter().zip(u).map(|(d, x)| (seasonal.value(*d) + x).exp()).collect();
    PriceSeries::new(dates, prices)
}
