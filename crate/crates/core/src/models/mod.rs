//! Market models driven by the coupled jump counts: Merton (geometric
//! Brownian motion with lognormal jumps), a geometric Ornstein–Uhlenbeck spot
//! model with damped normal log-jumps, and a two-factor Schwartz–Smith model
//! with jumps in both factors.
//!
//! Every model is used through its law conditional on the jump counts: given
//! `n` jumps, a leg's terminal price is `S^(n) exp(−v/2 + √v H)` with a
//! standard normal `H`, an effective spot `S^(n)` and a terminal variance `v`.

mod curve;
mod gou;
mod merton;
mod ss;

pub use curve::{year_fraction, ForwardCurve, DAYS_PER_YEAR};
pub use gou::{ou_jump_correlation, GouLeg, GouMarket};
pub use merton::{gbm_jump_correlation, MertonLeg, MertonMarket};
pub use ss::{SsCompensator, SsMarket};

use serde::{Deserialize, Serialize};

use crate::bipoisson::JumpPair;
use crate::error::Result;

/// Selects one leg of a two-asset market.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Leg {
    First,
    Second,
}

/// Conditional law of one leg given its jump count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalLeg {
    /// Effective initial price `S^(n)`.
    pub spot: f64,
    /// Terminal log-variance `v^(J,n)`.
    pub variance: f64,
    /// `∂S^(n) / ∂x` where `x` is the leg's quoted input (spot or forward).
    pub sensitivity: f64,
}

/// Two-leg market whose legs are conditionally lognormal given jump counts.
pub trait TwoLegMarket {
    /// Intensities and coupling of the two jump counts.
    fn jump_pair(&self) -> JumpPair;

    /// Conditional law of `leg` with `n` jumps by time `t`.
    fn conditional(&self, leg: Leg, n: usize, t: f64) -> Result<ConditionalLeg>;

    /// Correlation of the two conditional Gaussian innovations.
    fn jump_correlation(&self, n: usize, m: usize, t: f64) -> f64;

    /// `Σ_{n > n_max} π_n(λT) S^(n)`, the effective-spot mass beyond truncation.
    fn spot_tail(&self, leg: Leg, n_max: usize, t: f64) -> Result<f64>;

    /// The leg's quoted initial input (spot or forward at `t`).
    fn quoted(&self, leg: Leg, t: f64) -> Result<f64>;

    /// Factor applied to conditional exchange-option values: 1 when the
    /// effective spots grow at the rate `r`, `e^{−rT}` when they are
    /// forward-normalised.
    fn payoff_discount(&self, t: f64) -> f64;
}
