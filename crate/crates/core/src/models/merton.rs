use serde::{Deserialize, Serialize};

use super::{ConditionalLeg, Leg, TwoLegMarket};
use crate::bipoisson::{Dependence, JumpPair};
use crate::error::{domain, Result};
use crate::specfun::poisson_upper_tail;

/// One asset following geometric Brownian motion with lognormal jumps
/// `J = M exp(−ν²/2 + νZ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MertonLeg {
    pub s0: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub jump_m: f64,
    pub jump_nu: f64,
}

impl MertonLeg {
    pub fn new(s0: f64, sigma: f64, lambda: f64, jump_m: f64, jump_nu: f64) -> Result<Self> {
        let leg = Self { s0, sigma, lambda, jump_m, jump_nu };
        leg.validate()?;
        Ok(leg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s0 > 0.0) {
            return domain(format!("initial price must be positive, got {}", self.s0));
        }
        if !(self.sigma >= 0.0) || !(self.lambda >= 0.0) || !(self.jump_nu >= 0.0) {
            return domain("volatility, intensity and jump volatility must be nonnegative");
        }
        if !(self.jump_m > 0.0) {
            return domain(format!("mean jump factor must be positive, got {}", self.jump_m));
        }
        Ok(())
    }

    /// `v = σ²T + nν²`.
    pub fn terminal_variance(&self, n: usize, t: f64) -> f64 {
        self.sigma * self.sigma * t + n as f64 * self.jump_nu * self.jump_nu
    }

    /// `S^(n) = S(0) Mⁿ exp(λT(1 − M))`; the exponential is the risk-neutral
    /// jump compensator.
    pub fn effective_spot(&self, n: usize, t: f64) -> f64 {
        let ln = self.s0.ln() + n as f64 * self.jump_m.ln() + self.lambda * t * (1.0 - self.jump_m);
        ln.exp()
    }

    /// `Σ_{n > n_max} π_n(λT) S^(n) = S(0) P{Poisson(λTM) > n_max}`.
    pub fn spot_tail(&self, n_max: usize, t: f64) -> Result<f64> {
        Ok(self.s0 * poisson_upper_tail(n_max as u64, self.lambda * t * self.jump_m)?)
    }
}

/// Correlation of `σ1 W1(T) + √n ν1 Z1` and `σ2 W2(T) + √m ν2 Z2`.
#[allow(clippy::too_many_arguments)]
pub fn gbm_jump_correlation(
    sigma: (f64, f64),
    nu: (f64, f64),
    rho_w: f64,
    rho_d: f64,
    n: usize,
    m: usize,
    t: f64,
) -> f64 {
    let v1 = sigma.0 * sigma.0 * t + n as f64 * nu.0 * nu.0;
    let v2 = sigma.1 * sigma.1 * t + m as f64 * nu.1 * nu.1;
    if v1 <= 0.0 || v2 <= 0.0 {
        return 0.0;
    }
    let cov = rho_w * sigma.0 * sigma.1 * t + rho_d * ((n * m) as f64).sqrt() * nu.0 * nu.1;
    (cov / (v1 * v2).sqrt()).clamp(-1.0, 1.0)
}

/// Two Merton assets with correlated diffusions and jump sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MertonMarket {
    pub leg1: MertonLeg,
    pub leg2: MertonLeg,
    pub rho_w: f64,
    pub rho_d: f64,
    pub r: f64,
    pub dependence: Dependence,
}

impl MertonMarket {
    pub fn new(
        leg1: MertonLeg,
        leg2: MertonLeg,
        rho_w: f64,
        rho_d: f64,
        r: f64,
        dependence: Dependence,
    ) -> Result<Self> {
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

    pub fn leg(&self, leg: Leg) -> &MertonLeg {
        match leg {
            Leg::First => &self.leg1,
            Leg::Second => &self.leg2,
        }
    }
}

impl TwoLegMarket for MertonMarket {
    fn jump_pair(&self) -> JumpPair {
        JumpPair { lambda1: self.leg1.lambda, lambda2: self.leg2.lambda, dependence: self.dependence }
    }

    fn conditional(&self, leg: Leg, n: usize, t: f64) -> Result<ConditionalLeg> {
        let l = self.leg(leg);
        let spot = l.effective_spot(n, t);
        Ok(ConditionalLeg { spot, variance: l.terminal_variance(n, t), sensitivity: spot / l.s0 })
    }

    fn jump_correlation(&self, n: usize, m: usize, t: f64) -> f64 {
        gbm_jump_correlation(
            (self.leg1.sigma, self.leg2.sigma),
            (self.leg1.jump_nu, self.leg2.jump_nu),
            self.rho_w,
            self.rho_d,
            n,
            m,
            t,
        )
    }

    fn spot_tail(&self, leg: Leg, n_max: usize, t: f64) -> Result<f64> {
        self.leg(leg).spot_tail(n_max, t)
    }

    fn quoted(&self, leg: Leg, _t: f64) -> Result<f64> {
        Ok(self.leg(leg).s0)
    }

    fn payoff_discount(&self, _t: f64) -> f64 {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{path_rng, std_normal};
    use approx::assert_relative_eq;

    fn case_a_leg1() -> MertonLeg {
        MertonLeg::new(100.0, 0.2, 20.0, 1.1, 0.10).unwrap()
    }

    #[test]
    fn variance_values() {
        let l = case_a_leg1();
        assert_relative_eq!(l.terminal_variance(0, 1.0), 0.04, max_relative = 1e-15);
        assert_relative_eq!(l.terminal_variance(20, 1.0), 0.24, max_relative = 1e-15);
        let l2 = MertonLeg::new(100.0, 0.15, 20.0, 1.1, 0.07).unwrap();
        assert_relative_eq!(l2.terminal_variance(20, 1.0), 0.1205, max_relative = 1e-14);
    }

    #[test]
    fn effective_spot_values() {
        let l = case_a_leg1();
        assert_relative_eq!(
            l.effective_spot(20, 1.0),
            100.0 * 1.1f64.powi(20) * (-2.0f64).exp(),
            max_relative = 1e-13
        );
        let unit = MertonLeg::new(100.0, 0.2, 20.0, 1.0, 0.1).unwrap();
        assert_relative_eq!(unit.effective_spot(7, 1.0), 100.0, max_relative = 1e-14);
        let none = MertonLeg::new(100.0, 0.2, 0.0, 1.3, 0.1).unwrap();
        assert_relative_eq!(none.effective_spot(0, 2.0), 100.0, max_relative = 1e-14);
    }

    #[test]
    fn spot_tail_matches_direct_sum() {
        let l = case_a_leg1();
        let direct: f64 = (41..400)
            .map(|n| crate::specfun::poisson_pmf(n, 20.0).unwrap() * l.effective_spot(n as usize, 1.0))
            .sum();
        assert_relative_eq!(l.spot_tail(40, 1.0).unwrap(), direct, max_relative = 1e-10);
    }

    #[test]
    fn jump_correlation_reductions() {
        assert_relative_eq!(gbm_jump_correlation((0.2, 0.15), (0.1, 0.07), 0.8, 0.99, 0, 0, 1.0), 0.8);
        assert_eq!(gbm_jump_correlation((0.2, 0.15), (0.1, 0.07), 0.0, 0.0, 5, 3, 1.0), 0.0);
        let expected = (0.8 * 0.2 * 0.15 + 0.99 * 20.0 * 0.10 * 0.07) / (0.24f64 * 0.1205).sqrt();
        assert_relative_eq!(
            gbm_jump_correlation((0.2, 0.15), (0.1, 0.07), 0.8, 0.99, 20, 20, 1.0),
            expected,
            max_relative = 1e-14
        );
    }

    #[test]
    fn jump_correlation_matches_sampled_gaussians() {
        // Build σ1W1 + √n ν1 Z1 and σ2W2 + √m ν2 Z2 from independent normals.
        let (n, m) = (20usize, 20usize);
        let (rw, rd) = (0.8, 0.99);
        let mut rng = path_rng(21, 0);
        let k = 400_000;
        let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..k {
            let (g1, g2, g3, g4) = (std_normal(&mut rng), std_normal(&mut rng), std_normal(&mut rng), std_normal(&mut rng));
            let w1 = g1;
            let w2 = rw * g1 + (1.0 - rw * rw).sqrt() * g2;
            let z1 = g3;
            let z2 = rd * g3 + (1.0 - rd * rd).sqrt() * g4;
            let x = 0.2 * w1 + (n as f64).sqrt() * 0.10 * z1;
            let y = 0.15 * w2 + (m as f64).sqrt() * 0.07 * z2;
            sx += x;
            sy += y;
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
        }
        let kf = k as f64;
        let cov = sxy / kf - sx * sy / kf / kf;
        let corr = cov / ((sxx / kf - (sx / kf).powi(2)) * (syy / kf - (sy / kf).powi(2))).sqrt();
        let formula = gbm_jump_correlation((0.2, 0.15), (0.1, 0.07), rw, rd, n, m, 1.0);
        assert!((corr - formula).abs() < 3e-3, "sampled {corr} vs {formula}");
    }

    #[test]
    fn correlation_bounded_on_grid() {
        for &rw in &[-1.0, -0.3, 0.0, 0.7, 1.0] {
            for &rd in &[-1.0, 0.2, 1.0] {
                for n in (0..=200).step_by(37) {
                    for m in (0..=200).step_by(41) {
                        let c = gbm_jump_correlation((0.2, 0.15), (0.1, 0.07), rw, rd, n, m, 1.0);
                        assert!((-1.0..=1.0).contains(&c));
                    }
                }
            }
        }
    }
}
