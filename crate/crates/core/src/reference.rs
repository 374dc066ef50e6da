//! Published test cases: the two Merton markets used for spread prices and
//! the EEX / Powernext mean-reverting legs, with the spread values they are
//! expected to reproduce.

use crate::bipoisson::Dependence;
use crate::calibration::Theta;
use crate::error::Result;
use crate::models::{ForwardCurve, GouLeg, GouMarket, MertonLeg, MertonMarket};

/// The two Merton parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    A,
    B,
}

impl Case {
    pub fn name(&self) -> &'static str {
        match self {
            Case::A => "A",
            Case::B => "B",
        }
    }
}

/// Diffusion-only parameters `(σ1, σ2, ρ^W)` whose Margrabe values are
/// 7.27 (A) and 11.92 (B).
pub fn no_jump_params(case: Case) -> (f64, f64, f64) {
    match case {
        Case::A => (0.49, 0.35, 0.96),
        Case::B => (0.37, 0.23, 0.60),
    }
}

/// Merton market with jumps, `S1(0) = S2(0) = 100`, `r = 0`.
pub fn merton_market(case: Case, dependence: Dependence) -> Result<MertonMarket> {
    let (leg1, leg2, rho_d) = match case {
        Case::A => (
            MertonLeg::new(100.0, 0.2, 20.0, 1.1, 0.10)?,
            MertonLeg::new(100.0, 0.15, 20.0, 1.1, 0.07)?,
            0.99,
        ),
        Case::B => (
            MertonLeg::new(100.0, 0.2, 40.0, 1.05, 0.05)?,
            MertonLeg::new(100.0, 0.15, 20.0, 1.05, 0.04)?,
            0.5,
        ),
    };
    MertonMarket::new(leg1, leg2, 0.8, rho_d, 0.0, dependence)
}

/// Expected spread values: no-jump Margrabe, then independent jumps.
pub const TABLE2: [(Case, f64, f64, f64, f64); 2] = [(Case::A, 7.27, 0.05, 25.23, 0.20), (Case::B, 11.92, 0.20, 19.27, 0.20)];

/// One row of the dependence sweep: weight `a`, and per case the printed
/// count correlation (percent), the correlation-matched common intensity and
/// the common and cointegrated spread values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub a: f64,
    pub rho_pct: [f64; 2],
    pub lambda: [f64; 2],
    pub common: [f64; 2],
    pub cointegrated: [f64; 2],
}

#[allow(clippy::too_many_arguments)]
const fn row(a: f64, ra: f64, la: f64, ca: f64, ka: f64, rb: f64, lb: f64, cb: f64, kb: f64) -> SweepRow {
    SweepRow { a, rho_pct: [ra, rb], lambda: [la, lb], common: [ca, cb], cointegrated: [ka, kb] }
}

/// Spread values under common and cointegrated jumps, `T = 1`.
pub const TABLE3: [SweepRow; 18] = [
    row(0.10, 9.0, 1.80, 24.30, 24.22, 7.0, 2.09, 18.87, 18.87),
    row(0.15, 14.0, 2.71, 23.76, 23.64, 11.0, 3.13, 18.66, 18.67),
    row(0.20, 18.0, 3.63, 23.20, 23.05, 15.0, 4.16, 18.45, 18.46),
    row(0.25, 23.0, 4.55, 22.63, 22.44, 18.0, 5.19, 18.25, 18.26),
    row(0.30, 27.0, 5.47, 22.04, 21.81, 22.0, 6.21, 18.04, 18.05),
    row(0.35, 32.0, 6.40, 21.42, 21.16, 26.0, 7.23, 17.83, 17.83),
    row(0.40, 37.0, 7.34, 20.78, 20.48, 29.0, 8.24, 17.61, 17.62),
    row(0.45, 41.0, 8.29, 20.11, 19.78, 33.0, 9.25, 17.40, 17.40),
    row(0.50, 46.0, 9.24, 19.41, 19.05, 36.0, 10.25, 17.18, 17.18),
    row(0.55, 51.0, 10.20, 18.68, 18.29, 40.0, 11.25, 16.97, 16.96),
    row(0.60, 56.0, 11.17, 17.90, 17.49, 43.0, 12.24, 16.75, 16.74),
    row(0.65, 61.0, 12.16, 17.08, 16.64, 47.0, 13.23, 16.53, 16.51),
    row(0.70, 66.0, 13.15, 16.20, 15.74, 50.0, 14.21, 16.30, 16.29),
    row(0.75, 71.0, 14.17, 15.25, 14.78, 54.0, 15.19, 16.08, 16.06),
    row(0.80, 76.0, 15.20, 14.21, 13.75, 57.0, 16.16, 15.85, 15.83),
    row(0.85, 81.0, 16.26, 13.06, 12.61, 61.0, 17.13, 15.62, 15.60),
    row(0.90, 87.0, 17.36, 11.74, 11.33, 64.0, 18.09, 15.38, 15.37),
    row(0.95, 93.0, 18.53, 10.14, 9.82, 67.0, 19.05, 15.15, 15.14),
];

/// Tolerance on every sweep value.
pub const TABLE3_TOL: f64 = 0.10;

/// EEX marginal parameters.
pub const EEX: Theta = Theta { k: 42.50, sigma: 1.66, lambda: 95.32, jump_m: -0.10, jump_nu: 0.16 };
/// Powernext marginal parameters.
pub const POWERNEXT: Theta = Theta { k: 41.64, sigma: 1.52, lambda: 56.74, jump_m: -0.06, jump_nu: 0.38 };
/// Diffusion correlation between the two markets.
pub const RHO_W_POWER: f64 = 0.43;
/// Self-decomposability weight of the cointegrated fit.
pub const A_POWER: f64 = 0.44;

/// GOU leg with the given marginal parameters on `fwd`.
pub fn gou_leg(theta: &Theta, fwd: ForwardCurve) -> Result<GouLeg> {
    GouLeg::new(fwd, theta.k, theta.sigma, theta.lambda, theta.jump_m, theta.jump_nu)
}

/// EEX (first leg) and Powernext (second leg) on flat forwards, `ρ^D = 0`,
/// `r = 0`.
pub fn power_market(fwd: f64, dependence: Dependence) -> Result<GouMarket> {
    let f = ForwardCurve::flat(fwd)?;
    GouMarket::new(gou_leg(&EEX, f.clone())?, gou_leg(&POWERNEXT, f)?, RHO_W_POWER, 0.0, 0.0, dependence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoisson::common_jump_correlation;

    #[test]
    fn matched_intensities_reproduce_printed_correlations() {
        for r in TABLE3 {
            for (i, (l1, l2)) in [(20.0, 20.0), (40.0, 20.0)].into_iter().enumerate() {
                let rho = 100.0 * common_jump_correlation(r.lambda[i], l1, l2).unwrap();
                assert!((rho - r.rho_pct[i]).abs() <= 1.0, "a = {}: {rho} vs {}", r.a, r.rho_pct[i]);
            }
        }
    }

    #[test]
    fn markets_build() {
        for c in [Case::A, Case::B] {
            assert!(merton_market(c, Dependence::Cointegrated { a: 0.5 }).is_ok());
        }
        assert!(power_market(30.0, Dependence::Cointegrated { a: A_POWER }).is_ok());
    }
}
