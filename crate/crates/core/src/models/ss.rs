use serde::{Deserialize, Serialize};

use super::ForwardCurve;
use crate::bipoisson::{JointPmf, JumpPair};
use crate::error::{domain, Error, Result};

/// Smallest pmf tail tolerance the compensator series may request.
const MIN_TAIL_TOL: f64 = 1e-200;

/// Two-factor Schwartz–Smith spot with jumps in both factors:
/// `S(t) = F(0,t) exp(U1(t) + U2(t) + h(t))`, where `U1` is an OU factor
/// with damped jumps driven by `N1` and `U2` a Brownian factor with drift
/// `μ` and jumps driven by `N2`. Both jump sizes are `N(M, ν²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsMarket {
    pub fwd: ForwardCurve,
    pub k: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub rho: f64,
    pub mu: f64,
    pub jump_m: f64,
    pub jump_nu: f64,
    pub jumps: JumpPair,
}

/// Jump compensator `b(t)` together with the pmf that produced it.
#[derive(Debug, Clone)]
pub struct SsCompensator {
    pub b: f64,
    pub pmf: JointPmf,
    /// Bound on the relative error of `e^{b}` from truncating the pmf.
    pub rel_bound: f64,
}

impl SsMarket {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        fwd: ForwardCurve,
        k: f64,
        sigma1: f64,
        sigma2: f64,
        rho: f64,
        mu: f64,
        jump_m: f64,
        jump_nu: f64,
        jumps: JumpPair,
    ) -> Result<Self> {
        let mk = Self { fwd, k, sigma1, sigma2, rho, mu, jump_m, jump_nu, jumps };
        mk.validate()?;
        Ok(mk)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0) {
            return domain(format!("mean reversion must be positive, got {}", self.k));
        }
        if !(self.sigma1 >= 0.0) || !(self.sigma2 >= 0.0) || !(self.jump_nu >= 0.0) {
            return domain("volatilities must be nonnegative");
        }
        if !(-1.0..=1.0).contains(&self.rho) {
            return domain(format!("factor correlation must lie in [-1, 1], got {}", self.rho));
        }
        if !self.mu.is_finite() || !self.jump_m.is_finite() {
            return domain("drift and jump mean must be finite");
        }
        self.jumps.validate()
    }

    /// `Var[U1^C + U2^C] = σ1²(1 − e^{−2kt})/(2k) + σ2² t + 2ρσ1σ2(1 − e^{−kt})/k`.
    pub fn variance(&self, t: f64) -> f64 {
        let k = self.k;
        -self.sigma1 * self.sigma1 * (-2.0 * k * t).exp_m1() / (2.0 * k) + self.sigma2 * self.sigma2 * t
            - 2.0 * self.rho * self.sigma1 * self.sigma2 * (-k * t).exp_m1() / k
    }

    /// `a(t) = μt + ½ Var[U^C(t)]`.
    pub fn a(&self, t: f64) -> f64 {
        self.mu * t + 0.5 * self.variance(t)
    }

    /// `ln φ(u) = Mu + ½ν²u²`, the log moment generating function of a jump.
    fn ln_phi(&self, u: f64) -> f64 {
        self.jump_m * u + 0.5 * self.jump_nu * self.jump_nu * u * u
    }

    /// `b(t) = ln Σ p_{m1,m2}(t) φ(e^{−kt})^{m1} φ(1)^{m2}`.
    pub fn b(&self, t: f64, tail_tol: f64) -> Result<f64> {
        Ok(self.compensator(t, tail_tol)?.b)
    }

    /// Evaluates `b(t)`, tightening the pmf truncation until the neglected
    /// mass, bounded by Cauchy–Schwarz, is below `tail_tol` relative.
    pub fn compensator(&self, t: f64, tail_tol: f64) -> Result<SsCompensator> {
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return domain(format!("tail tolerance must lie in (0, 1), got {tail_tol}"));
        }
        let g1 = self.ln_phi((-self.k * t).exp());
        let g2 = self.ln_phi(1.0);
        // (E[φ1^{4N1}] E[φ2^{4N2}])^{1/4} with E[c^N] = exp(λt(c − 1)).
        let moment = 0.25
            * (self.jumps.lambda1 * t * (4.0 * g1).exp_m1() + self.jumps.lambda2 * t * (4.0 * g2).exp_m1());
        let mut pmf_tol = tail_tol;
        loop {
            let pmf = self.jumps.joint_pmf(t, pmf_tol)?;
            let total: f64 = pmf.iter().map(|(m1, m2, p)| p * (m1 as f64 * g1 + m2 as f64 * g2).exp()).sum();
            let tail = pmf.tail_mass.max(0.0);
            let rel_bound = if tail == 0.0 { 0.0 } else { (0.5 * tail.ln() + moment).exp() / total };
            if rel_bound <= tail_tol {
                return Ok(SsCompensator { b: total.ln(), pmf, rel_bound });
            }
            let wanted = 0.5 * ((tail_tol * total).ln() - moment).exp().powi(2);
            let next = wanted.min(pmf_tol * 1e-2);
            if next < MIN_TAIL_TOL {
                return Err(Error::Truncation(format!(
                    "jump compensator series not converged at t = {t}: bound {rel_bound:.3e}"
                )));
            }
            pmf_tol = next;
        }
    }

    /// `S^{(n1,n2)} = F(0,T) exp(−b + n1 e^{−kT}(M + ½e^{−kT}ν²) + n2(M + ½ν²))`.
    pub fn effective_spot(&self, n1: usize, n2: usize, t: f64, b: f64) -> Result<f64> {
        let g1 = self.ln_phi((-self.k * t).exp());
        let g2 = self.ln_phi(1.0);
        Ok(self.fwd.value(t)? * (-b + n1 as f64 * g1 + n2 as f64 * g2).exp())
    }

    /// `v = Var[U^C(T)] + (e^{−2kT} n1 + n2) ν²`.
    pub fn terminal_variance(&self, n1: usize, n2: usize, t: f64) -> f64 {
        self.variance(t) + ((-2.0 * self.k * t).exp() * n1 as f64 + n2 as f64) * self.jump_nu * self.jump_nu
    }
}
