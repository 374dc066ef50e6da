//! Option values by conditioning on the jump counts: the abstract
//! Black–Scholes formula, jump-conditioned vanilla series, zero-strike spread
//! (Margrabe) series under the three jump couplings, their deltas, and Monte
//! Carlo counterparts.

mod interconnector;
mod mc;
mod spread;
mod vanilla;

pub use interconnector::{delivery_days, price_interconnector, InterconnectorResult, MonthlyValue};
pub use mc::{mc_forward, mc_spread, mc_vanilla, McEstimate, PathModel};
pub use spread::{price_spread, price_spread_with_pmf, Direction, SpreadSpec};
pub use vanilla::{price_vanilla, VanillaModel, VanillaSpec};

use serde::{Deserialize, Serialize};

use crate::specfun::norm_cdf;

/// Call or put.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
}

/// Arguments of the abstract Black–Scholes formula. `v` is the total
/// log-variance to maturity, so `σ√T = √v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsArgs {
    pub p0: f64,
    pub k: f64,
    pub r: f64,
    pub t: f64,
    pub v: f64,
    pub q: f64,
}

/// Black–Scholes price; the put follows from parity.
pub fn black_scholes(args: &BsArgs, kind: OptionKind) -> f64 {
    let BsArgs { p0, k, r, t, v, q } = *args;
    let fwd = p0 * (-q * t).exp();
    let disc_k = k * (-r * t).exp();
    let call = if v <= 0.0 || k <= 0.0 {
        (fwd - disc_k).max(0.0)
    } else {
        let sd = v.sqrt();
        let d1 = ((fwd / disc_k).ln() + 0.5 * v) / sd;
        fwd * norm_cdf(d1) - disc_k * norm_cdf(d1 - sd)
    };
    match kind {
        OptionKind::Call => call,
        OptionKind::Put => (call - fwd + disc_k).max(0.0),
    }
}

/// `∂BS/∂p0`.
pub fn black_scholes_delta(args: &BsArgs, kind: OptionKind) -> f64 {
    let BsArgs { p0, k, r, t, v, q } = *args;
    let df_q = (-q * t).exp();
    let n_d1 = if v <= 0.0 || k <= 0.0 {
        if p0 * df_q > k * (-r * t).exp() { 1.0 } else { 0.0 }
    } else {
        let sd = v.sqrt();
        norm_cdf(((p0 / k).ln() + (r - q) * t + 0.5 * v) / sd)
    };
    match kind {
        OptionKind::Call => df_q * n_d1,
        OptionKind::Put => df_q * (n_d1 - 1.0),
    }
}

/// `d1, d2` of the exchange option `max(S1 − S2, 0)` with spread variance `v`.
fn margrabe_d(s1: f64, s2: f64, v: f64) -> (f64, f64) {
    let sd = v.sqrt();
    let d1 = ((s1 / s2).ln() + 0.5 * v) / sd;
    (d1, d1 - sd)
}

/// Exchange option `E[max(S1(T) − S2(T), 0)]` in units of the second asset's
/// numeraire. The interest rate plays no role; `_t` only documents the
/// maturity to which `v` refers.
pub fn margrabe(s1: f64, s2: f64, v: f64, _t: f64) -> f64 {
    if v <= 0.0 || s2 <= 0.0 || s1 <= 0.0 {
        return (s1 - s2).max(0.0);
    }
    let (d1, d2) = margrabe_d(s1, s2, v);
    s1 * norm_cdf(d1) - s2 * norm_cdf(d2)
}

/// `(∂/∂S1, ∂/∂S2)` of [`margrabe`].
pub fn margrabe_deltas(s1: f64, s2: f64, v: f64) -> (f64, f64) {
    if v <= 0.0 || s2 <= 0.0 || s1 <= 0.0 {
        return if s1 > s2 { (1.0, -1.0) } else { (0.0, 0.0) };
    }
    let (d1, d2) = margrabe_d(s1, s2, v);
    (norm_cdf(d1), -norm_cdf(d2))
}

/// `v1 + v2 − 2ρ√(v1 v2)`, floored at zero against rounding.
pub fn spread_variance(v1: f64, v2: f64, rho: f64) -> f64 {
    (v1 + v2 - 2.0 * rho * (v1 * v2).sqrt()).max(0.0)
}

/// Value of a truncated series with its error bound and first-order deltas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceResult {
    pub value: f64,
    /// Upper bound on the value of the neglected terms.
    pub trunc_bound: f64,
    pub terms_m: usize,
    pub terms_n: usize,
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
}
