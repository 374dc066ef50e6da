//! Dependent bivariate Poisson processes built from self-decomposable
//! exponential inter-arrival times, jump-diffusion market models driven by
//! them, closed-form vanilla and spread option prices, and mixture-likelihood
//! calibration.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bipoisson;
pub mod calibration;
pub mod error;
pub mod models;
pub mod pricing;
pub mod reference;
pub mod rng;
pub mod specfun;

pub use bipoisson::{Dependence, DependenceParams, JointPmf, JumpPair, DEFAULT_TAIL_TOL};
pub use calibration::{CalibrationResult, PriceSeries, Theta};
pub use error::{Error, Result};
pub use models::{ForwardCurve, GouLeg, GouMarket, Leg, MertonLeg, MertonMarket, SsMarket, TwoLegMarket};
pub use pricing::{Direction, OptionKind, PriceResult, SpreadSpec, VanillaSpec};
