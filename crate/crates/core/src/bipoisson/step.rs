use serde::{Deserialize, Serialize};

use super::{joint_cdf_exponential, Dependence, DependenceParams, JumpPair};
use crate::error::{Error, Result};

/// One-step law of the jump indicators: `p_ij = P{1_{N1} = i, 1_{N2} = j}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepProbs {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
}

impl StepProbs {
    /// Builds the law from the three jump probabilities, closing `p00`.
    fn closed(p01: f64, p10: f64, p11: f64, dt: f64) -> Result<Self> {
        let p = Self { p00: 1.0 - p01 - p10 - p11, p01, p10, p11 };
        for (name, v) in [("p00", p.p00), ("p01", p.p01), ("p10", p.p10), ("p11", p.p11)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::StepTooLarge(format!("{name} = {v} at dt = {dt}")));
            }
        }
        Ok(p)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.p00, self.p01, self.p10, self.p11]
    }

    pub fn max_abs_diff(&self, other: &StepProbs) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// Small-step joint jump probabilities for each coupling.
///
/// * independent: products of `λ_i Δt` and `1 − λ_i Δt`
/// * common: `p11 = λΔt`, `p10 = (λ1 − λ)Δt`, `p01 = (λ2 − λ)Δt`
/// * cointegrated, `γ > 1`: `p01 = 0`, `p11 = λ2Δt`,
///   `p10 = (λ1 − λ2)Δt − λ1(λ1/γ − λ2)Δt²`
/// * cointegrated, `γ <= 1`: `p11 = γλ2Δt`, `p10 = (λ1 − γλ2)Δt`,
///   `p01 = λ2(1 − γ)Δt`
///
/// `p00` is set so the four entries sum to one.
pub fn step_probs(pair: &JumpPair, dt: f64) -> Result<StepProbs> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    pair.validate()?;
    let (l1, l2) = (pair.lambda1, pair.lambda2);
    match pair.dependence {
        Dependence::Independent => {
            StepProbs::closed((1.0 - l1 * dt) * l2 * dt, l1 * dt * (1.0 - l2 * dt), l1 * l2 * dt * dt, dt)
        }
        Dependence::Common { lambda } => {
            StepProbs::closed((l2 - lambda) * dt, (l1 - lambda) * dt, lambda * dt, dt)
        }
        Dependence::Cointegrated { a } => {
            if a == 0.0 || l1 == 0.0 || l2 == 0.0 {
                let ind = JumpPair { dependence: Dependence::Independent, ..*pair };
                return step_probs(&ind, dt);
            }
            let g = a * l1 / l2;
            if g > 1.0 {
                let p10 = (l1 - l2) * dt - l1 * (l1 / g - l2) * dt * dt;
                StepProbs::closed(0.0, p10, l2 * dt, dt)
            } else {
                StepProbs::closed(l2 * (1.0 - g) * dt, (l1 - g * l2) * dt, g * l2 * dt, dt)
            }
        }
    }
}

/// First-arrival probabilities over one step from the exact joint CDF:
/// `p11 = H(Δt, Δt)`, `p10 = F1(Δt) − H`, `p01 = F2(Δt) − H`.
pub fn cdf_step_probs(params: &DependenceParams, dt: f64) -> Result<StepProbs> {
    let h = joint_cdf_exponential(dt, dt, params);
    let f1 = -(-params.lambda1 * dt).exp_m1();
    let f2 = -(-params.lambda2 * dt).exp_m1();
    StepProbs::closed((f2 - h).max(0.0), (f1 - h).max(0.0), h, dt)
}
