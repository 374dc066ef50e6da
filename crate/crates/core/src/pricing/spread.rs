use serde::{Deserialize, Serialize};

use super::{margrabe, margrabe_deltas, spread_variance, PriceResult};
use crate::bipoisson::JointPmf;
use crate::error::{domain, Result};
use crate::models::{ConditionalLeg, Leg, TwoLegMarket};
use crate::specfun::poisson_upper_tail;

/// Zero-strike spread contract.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadSpec {
    pub maturity: f64,
    /// Must be zero; kept explicit so non-zero strikes fail loudly.
    #[serde(default)]
    pub strike: f64,
}

/// Which leg is bought: `FirstOverSecond` pays `max(S1 − S2, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    #[default]
    FirstOverSecond,
    SecondOverFirst,
}

/// Spread value `Σ P{N1 = n1, N2 = n2} · Margrabe(S1^(n1), S2^(n2), v^(n1,n2))`
/// with the joint law of the market's jump coupling, and the two deltas with
/// respect to the legs' quoted inputs.
pub fn price_spread<M: TwoLegMarket + ?Sized>(
    market: &M,
    spec: &SpreadSpec,
    direction: Direction,
    tail_tol: f64,
) -> Result<PriceResult> {
    let t = spec.maturity;
    if spec.strike != 0.0 {
        return domain(format!("only zero-strike spreads are supported, got strike {}", spec.strike));
    }
    if !(t > 0.0) {
        return domain(format!("maturity must be positive, got {t}"));
    }
    let pmf = market.jump_pair().joint_pmf(t, tail_tol)?;
    price_spread_with_pmf(market, spec, direction, &pmf)
}

/// [`price_spread`] with a precomputed joint law of the jump counts at the
/// maturity, which must be the law of `market.jump_pair()`.
pub fn price_spread_with_pmf<M: TwoLegMarket + ?Sized>(
    market: &M,
    spec: &SpreadSpec,
    direction: Direction,
    pmf: &JointPmf,
) -> Result<PriceResult> {
    let t = spec.maturity;
    if spec.strike != 0.0 {
        return domain(format!("only zero-strike spreads are supported, got strike {}", spec.strike));
    }
    if (pmf.t - t).abs() > 1e-12 * t.max(1.0) {
        return domain(format!("pmf horizon {} does not match maturity {t}", pmf.t));
    }
    let pair = market.jump_pair();
    let legs = |leg: Leg, n_max: usize| -> Result<Vec<ConditionalLeg>> {
        (0..=n_max).map(|n| market.conditional(leg, n, t)).collect()
    };
    let first = legs(Leg::First, pmf.m_max)?;
    let second = legs(Leg::Second, pmf.n_max)?;

    let (mut value, mut delta1, mut delta2) = (0.0, 0.0, 0.0);
    for (n1, n2, p) in pmf.iter() {
        if p == 0.0 {
            continue;
        }
        let (c1, c2) = (&first[n1], &second[n2]);
        let v = spread_variance(c1.variance, c2.variance, market.jump_correlation(n1, n2, t));
        match direction {
            Direction::FirstOverSecond => {
                let (d1, d2) = margrabe_deltas(c1.spot, c2.spot, v);
                value += p * margrabe(c1.spot, c2.spot, v, t);
                delta1 += p * d1 * c1.sensitivity;
                delta2 += p * d2 * c2.sensitivity;
            }
            Direction::SecondOverFirst => {
                let (d2, d1) = margrabe_deltas(c2.spot, c1.spot, v);
                value += p * margrabe(c2.spot, c1.spot, v, t);
                delta1 += p * d1 * c1.sensitivity;
                delta2 += p * d2 * c2.sensitivity;
            }
        }
    }

    // The payoff never exceeds the long leg, so the neglected cells are worth
    // at most the long leg's effective-spot mass outside the grid.
    let tail1 = poisson_upper_tail(pmf.m_max as u64, pair.lambda1 * t)?;
    let tail2 = poisson_upper_tail(pmf.n_max as u64, pair.lambda2 * t)?;
    let max_spot = |legs: &[ConditionalLeg]| legs.iter().map(|c| c.spot).fold(0.0, f64::max);
    let bound = match direction {
        Direction::FirstOverSecond => market.spot_tail(Leg::First, pmf.m_max, t)? + max_spot(&first) * tail2,
        Direction::SecondOverFirst => market.spot_tail(Leg::Second, pmf.n_max, t)? + max_spot(&second) * tail1,
    };

    let disc = market.payoff_discount(t);
    Ok(PriceResult {
        value: disc * value,
        trunc_bound: disc * bound,
        terms_m: pmf.m_max,
        terms_n: pmf.n_max,
        delta1: Some(disc * delta1),
        delta2: Some(disc * delta2),
    })
}
