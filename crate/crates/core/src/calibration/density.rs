use serde::{Deserialize, Serialize};

use crate::bipoisson::StepProbs;
use crate::error::{domain, Result};
use crate::specfun::ln_bivariate_normal_pdf;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Marginal parameters `θ = (k, σ, λ, M, ν)` of one mean-reverting leg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theta {
    pub k: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub jump_m: f64,
    pub jump_nu: f64,
}

/// Gaussian components of one Euler step.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StepLaw {
    pub mean_c: f64,
    pub mean_j: f64,
    pub sd_c: f64,
    pub sd_j: f64,
    /// `ν e^{−kt}`, the jump part of `sd_j`.
    pub jump_sd: f64,
}

impl Theta {
    /// Moments of `U(t + Δt)` given `U(t) = u`, the latent level being
    /// `u + offset`.
    pub(crate) fn step_law(&self, u: f64, offset: f64, t: f64, dt: f64) -> StepLaw {
        let x = u + offset;
        let mean_c = (1.0 - self.k * dt) * x - offset;
        let decay = (-self.k * t).exp();
        let var_c = self.sigma * self.sigma * dt;
        let jump_sd = decay * self.jump_nu;
        StepLaw {
            mean_c,
            mean_j: mean_c + self.jump_m * decay,
            sd_c: var_c.sqrt(),
            sd_j: (var_c + jump_sd * jump_sd).sqrt(),
            jump_sd,
        }
    }
}

fn ln_normal(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    -0.5 * z * z - sd.ln() - LN_SQRT_2PI
}

/// `ln(Σ w_i e^{l_i})` over the entries with positive weight.
pub(crate) fn ln_mix(terms: &[(f64, f64)]) -> f64 {
    let top = terms.iter().filter(|(w, _)| *w > 0.0).map(|(_, l)| *l).fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = terms.iter().filter(|(w, _)| *w > 0.0).map(|(w, l)| w * (l - top).exp()).sum();
    top + s.ln()
}

pub(crate) fn ln_density_1d(u_next: f64, u: f64, theta: &Theta, offset: f64, t: f64, dt: f64) -> f64 {
    let law = theta.step_law(u, offset, t, dt);
    let pj = theta.lambda * dt;
    ln_mix(&[
        (1.0 - pj, ln_normal(u_next, law.mean_c, law.sd_c)),
        (pj, ln_normal(u_next, law.mean_j, law.sd_j)),
    ])
}

/// Euler-scheme transition density
/// `(1 − λΔt) N(μ^C, σ^C) + λΔt N(μ^J, σ^J)` at `u_next`, with
/// `μ^C = (1 − kΔt)u`, `μ^J = μ^C + M e^{−kt}`, `σ^C = σ√Δt` and
/// `(σ^J)² = σ²Δt + e^{−2kt}ν²`.
pub fn transition_density_1d(u_next: f64, u: f64, theta: &Theta, t: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return domain(format!("time step must be positive, got {dt}"));
    }
    if !(theta.lambda * dt < 1.0) || theta.lambda < 0.0 {
        return domain(format!("jump probability λΔt = {} must lie in [0, 1)", theta.lambda * dt));
    }
    if !(theta.sigma > 0.0) {
        return domain("diffusion volatility must be positive");
    }
    Ok(ln_density_1d(u_next, u, theta, 0.0, t, dt).exp())
}

/// Correlations entering the bivariate step density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct JointCorr {
    pub rho_w: f64,
    pub rho_d: f64,
}

/// `ln` of the four-component bivariate mixture at `x_next` given `x`.
/// Off-jump blocks carry the diffusion covariance `ρ^W σ1^C σ2^C`; the
/// both-jump block adds `ρ^D ν1 ν2 e^{−(k1+k2)t}`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn ln_density_2d(
    x_next: (f64, f64),
    x: (f64, f64),
    thetas: (&Theta, &Theta),
    offsets: (f64, f64),
    corr: JointCorr,
    probs: &StepProbs,
    t: f64,
    dt: f64,
) -> f64 {
    let l1 = thetas.0.step_law(x.0, offsets.0, t, dt);
    let l2 = thetas.1.step_law(x.1, offsets.1, t, dt);
    let cov_w = corr.rho_w * l1.sd_c * l2.sd_c;
    let comp = |m1: f64, s1: f64, m2: f64, s2: f64, cov: f64| {
        ln_bivariate_normal_pdf(x_next, (m1, m2), (s1, s2), (cov / (s1 * s2)).clamp(-0.999_999, 0.999_999))
    };
    let cov_jj = cov_w + corr.rho_d * l1.jump_sd * l2.jump_sd;
    ln_mix(&[
        (probs.p00, comp(l1.mean_c, l1.sd_c, l2.mean_c, l2.sd_c, cov_w)),
        (probs.p01, comp(l1.mean_c, l1.sd_c, l2.mean_j, l2.sd_j, cov_w)),
        (probs.p10, comp(l1.mean_j, l1.sd_j, l2.mean_c, l2.sd_c, cov_w)),
        (probs.p11, comp(l1.mean_j, l1.sd_j, l2.mean_j, l2.sd_j, cov_jj)),
    ])
}
