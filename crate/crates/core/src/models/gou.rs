use serde::{Deserialize, Serialize};

use super::{ConditionalLeg, ForwardCurve, Leg, TwoLegMarket};
use crate::bipoisson::{Dependence, JumpPair};
use crate::error::{domain, Result};
use crate::specfun::poisson_upper_tail;

/// Spot `S(t) = F(0,t) exp(U(t) + h(t))` with
/// `dU = −kU dt + σ dW + e^{−kt} Y dN`, `Y ~ N(M, ν²)`, `U(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GouLeg {
    pub fwd: ForwardCurve,
    pub k: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub jump_m: f64,
    pub jump_nu: f64,
}

impl GouLeg {
    pub fn new(fwd: ForwardCurve, k: f64, sigma: f64, lambda: f64, jump_m: f64, jump_nu: f64) -> Result<Self> {
        let leg = Self { fwd, k, sigma, lambda, jump_m, jump_nu };
        leg.validate()?;
        Ok(leg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0) {
            return domain(format!("mean reversion must be positive, got {}", self.k));
        }
        if !(self.sigma >= 0.0) || !(self.lambda >= 0.0) || !(self.jump_nu >= 0.0) {
            return domain("volatility, intensity and jump volatility must be nonnegative");
        }
        if !self.jump_m.is_finite() {
            return domain("jump mean must be finite");
        }
        Ok(())
    }

    /// `Var[U^C(t)] = σ²(1 − e^{−2kt}) / (2k)`.
    pub fn ou_variance(&self, t: f64) -> f64 {
        -self.sigma * self.sigma * (-2.0 * self.k * t).exp_m1() / (2.0 * self.k)
    }

    /// `a(t) = ln E[e^{U^C(t)}] = ½ Var[U^C(t)]`.
    pub fn a(&self, t: f64) -> f64 {
        0.5 * self.ou_variance(t)
    }

    /// Per-jump log-growth `c(t) = e^{−kt}(M + ½ e^{−kt} ν²)`.
    fn jump_exponent(&self, t: f64) -> f64 {
        let d = (-self.k * t).exp();
        d * (self.jump_m + 0.5 * d * self.jump_nu * self.jump_nu)
    }

    /// `b(t) = ln E[e^{U^D(t)}] = λt (e^{c(t)} − 1)`.
    pub fn b(&self, t: f64) -> f64 {
        self.lambda * t * self.jump_exponent(t).exp_m1()
    }

    /// No-arbitrage drift `h(t) = −a(t) − b(t)`.
    pub fn h(&self, t: f64) -> f64 {
        -self.a(t) - self.b(t)
    }

    /// `pⁿ(T) = −b(T) + n c(T)`.
    pub fn p(&self, n: usize, t: f64) -> f64 {
        -self.b(t) + n as f64 * self.jump_exponent(t)
    }

    /// `S^(n) = F(0,T) e^{pⁿ(T)}`.
    pub fn effective_spot(&self, n: usize, t: f64) -> Result<f64> {
        Ok(self.fwd.value(t)? * self.p(n, t).exp())
    }

    /// `v = Var[U^C(T)] + n e^{−2kT} ν²`.
    pub fn terminal_variance(&self, n: usize, t: f64) -> f64 {
        self.ou_variance(t) + n as f64 * (-2.0 * self.k * t).exp() * self.jump_nu * self.jump_nu
    }

    /// `Σ_{n > n_max} π_n(λT) S^(n) = F(0,T) P{Poisson(λT e^{c}) > n_max}`.
    pub fn spot_tail(&self, n_max: usize, t: f64) -> Result<f64> {
        let tilted = self.lambda * t * self.jump_exponent(t).exp();
        Ok(self.fwd.value(t)? * poisson_upper_tail(n_max as u64, tilted)?)
    }
}

/// Correlation of `L_i = σ_i ∫ e^{−k_i(t−s)} dW_i + √n_i ν_i e^{−k_i t} Z_i`,
/// with the diffusion covariance written as
/// `ρ^W σ1 σ2 / (2√(k1 k2)) √(1 − e^{−2k1 t}) √(1 − e^{−2k2 t})`.
pub fn ou_jump_correlation(leg1: &GouLeg, leg2: &GouLeg, rho_w: f64, rho_d: f64, n: usize, m: usize, t: f64) -> f64 {
    let v1 = leg1.terminal_variance(n, t);
    let v2 = leg2.terminal_variance(m, t);
    if v1 <= 0.0 || v2 <= 0.0 {
        return 0.0;
    }
    let diff = rho_w * leg1.sigma * leg2.sigma / (2.0 * (leg1.k * leg2.k).sqrt())
        * (-(-2.0 * leg1.k * t).exp_m1()).sqrt()
        * (-(-2.0 * leg2.k * t).exp_m1()).sqrt();
    let jump = rho_d
        * ((n * m) as f64).sqrt()
        * leg1.jump_nu
        * leg2.jump_nu
        * (-(leg1.k + leg2.k) * t).exp();
    ((diff + jump) / (v1 * v2).sqrt()).clamp(-1.0, 1.0)
}

/// Two GOU spots with correlated diffusions and jump sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GouMarket {
    pub leg1: GouLeg,
    pub leg2: GouLeg,
    pub rho_w: f64,
    pub rho_d: f64,
    pub r: f64,
    pub dependence: Dependence,
}

impl GouMarket {
    pub fn new(leg1: GouLeg, leg2: GouLeg, rho_w: f64, rho_d: f64, r: f64, dependence: Dependence) -> Result<Self> {
        let mk = Self { leg1, leg2, rho_w, rho_d, r, dependence };
        mk.validate()?;
        Ok(mk)
    }

    pub fn validate(&self) -> Result<()> {
        self.leg1.validate()?;
        self.leg2.validate()?;
        if !(-1.0..=1.0).contains(&self.rho_w) || !(-1.0..=1.0).contains(&self.rho_d) {
            return domain("correlations must lie in [-1, 1]");
        }
        self.jump_pair().validate()
    }

    pub fn leg(&self, leg: Leg) -> &GouLeg {
        match leg {
            Leg::First => &self.leg1,
            Leg::Second => &self.leg2,
        }
    }

    /// Same market with a different jump coupling.
    pub fn with_dependence(&self, dependence: Dependence) -> Result<Self> {
        let mut mk = self.clone();
        mk.dependence = dependence;
        mk.validate()?;
        Ok(mk)
    }
}

impl TwoLegMarket for GouMarket {
    fn jump_pair(&self) -> JumpPair {
        JumpPair { lambda1: self.leg1.lambda, lambda2: self.leg2.lambda, dependence: self.dependence }
    }

    fn conditional(&self, leg: Leg, n: usize, t: f64) -> Result<ConditionalLeg> {
        let l = self.leg(leg);
        let spot = l.effective_spot(n, t)?;
        Ok(ConditionalLeg { spot, variance: l.terminal_variance(n, t), sensitivity: l.p(n, t).exp() })
    }

    fn jump_correlation(&self, n: usize, m: usize, t: f64) -> f64 {
        ou_jump_correlation(&self.leg1, &self.leg2, self.rho_w, self.rho_d, n, m, t)
    }

    fn spot_tail(&self, leg: Leg, n_max: usize, t: f64) -> Result<f64> {
        self.leg(leg).spot_tail(n_max, t)
    }

    fn quoted(&self, leg: Leg, t: f64) -> Result<f64> {
        self.leg(leg).fwd.value(t)
    }

    fn payoff_discount(&self, t: f64) -> f64 {
        (-self.r * t).exp()
    }
}
