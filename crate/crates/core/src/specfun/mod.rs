//! Poisson and binomial weights, integer-parameter Kummer functions and the
//! normal distribution helpers shared by the pricing and calibration code.
//!
//! Everything here is `f64`. The multiprecision twins used by the joint
//! probability evaluation live in [`multiprec`].

pub mod multiprec;

use statrs::function::factorial::ln_factorial;

use crate::error::{domain, Result};

/// Largest argument accepted by [`kummer_m_int`]. The forward series converges
/// for every `x >= 0`, but beyond this the value overflows long before the
/// term count becomes a problem.
pub const KUMMER_MAX_ARG: f64 = 500.0;

/// A probability weight held on the natural-log scale.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogWeight(pub f64);

impl LogWeight {
    pub const ZERO: LogWeight = LogWeight(f64::NEG_INFINITY);
    pub const ONE: LogWeight = LogWeight(0.0);

    #[inline]
    pub fn prob(self) -> f64 {
        self.0.exp()
    }
}

/// `ln π_k(α)`, the log of the Poisson(α) mass at `k`.
pub fn ln_poisson_pmf(k: u64, alpha: f64) -> Result<LogWeight> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return domain(format!("poisson mean must be finite and >= 0, got {alpha}"));
    }
    if alpha == 0.0 {
        return Ok(if k == 0 { LogWeight::ONE } else { LogWeight::ZERO });
    }
    Ok(LogWeight(-alpha + k as f64 * alpha.ln() - ln_factorial(k)))
}

/// `π_k(α) = e^{-α} α^k / k!`.
pub fn poisson_pmf(k: u64, alpha: f64) -> Result<f64> {
    ln_poisson_pmf(k, alpha).map(LogWeight::prob)
}

/// Poisson masses `π_0(α) ..= π_{k_max}(α)` by forward recurrence from the
/// mode, which is both faster and more accurate than repeated log-gamma calls.
pub fn poisson_pmf_vec(alpha: f64, k_max: usize) -> Result<Vec<f64>> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return domain(format!("poisson mean must be finite and >= 0, got {alpha}"));
    }
    let mut out = vec![0.0; k_max + 1];
    if alpha == 0.0 {
        out[0] = 1.0;
        return Ok(out);
    }
    let mode = (alpha.floor() as usize).min(k_max);
    out[mode] = poisson_pmf(mode as u64, alpha)?;
    for k in (mode + 1)..=k_max {
        out[k] = out[k - 1] * alpha / k as f64;
    }
    for k in (0..mode).rev() {
        out[k] = out[k + 1] * (k + 1) as f64 / alpha;
    }
    Ok(out)
}

/// Upper tail `P{Poisson(α) > k}` computed without cancellation.
pub fn poisson_upper_tail(k: u64, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return domain(format!("poisson mean must be finite and >= 0, got {alpha}"));
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    // Sum forward from k+1 until terms are negligible.
    let mut term = poisson_pmf(k + 1, alpha)?;
    let mut sum = 0.0;
    let mut j = k + 1;
    while term > 0.0 {
        sum += term;
        j += 1;
        term *= alpha / j as f64;
        if term < sum * 1e-17 && (j as f64) > alpha {
            break;
        }
    }
    Ok(sum.min(1.0))
}

/// `β_ℓ(n) = C(n, ℓ) a^{n-ℓ} (1-a)^ℓ`, the Binomial(n, 1-a) mass at `ℓ`.
/// `β_0(0) = 1` for every `a`.
pub fn binomial_weight(l: u64, n: u64, a: f64) -> Result<f64> {
    if l > n {
        return domain(format!("binomial index {l} exceeds trials {n}"));
    }
    if !(0.0..=1.0).contains(&a) {
        return domain(format!("binomial weight parameter must lie in [0, 1], got {a}"));
    }
    let fail = n - l;
    // Degenerate endpoints: 0^0 = 1.
    if a == 0.0 {
        return Ok(if fail == 0 { 1.0 } else { 0.0 });
    }
    if a == 1.0 {
        return Ok(if l == 0 { 1.0 } else { 0.0 });
    }
    // Multiplicative binomial coefficient and integer powers keep the
    // relative error near a few ulps; a log-space route loses ~|ln β| ulps.
    let k = l.min(fail);
    let mut c = 1.0_f64;
    for i in 1..=k {
        c = c * (n - k + i) as f64 / i as f64;
    }
    Ok(c * a.powi(fail as i32) * (1.0 - a).powi(l as i32))
}

/// Confluent hypergeometric `Φ(a; b; x) = ₁F₁(a; b; x)` for integer
/// `1 <= a <= b` and `0 <= x <= KUMMER_MAX_ARG`.
///
/// Forward Kummer series, stopped once the terms are decreasing and below
/// `1e-17` of the running sum. All terms are positive, so compensated
/// summation keeps the relative error at a few ulps.
pub fn kummer_m_int(a: u32, b: u32, x: f64) -> Result<f64> {
    if a == 0 || b == 0 {
        return domain("kummer parameters must be positive integers");
    }
    if a > b {
        return domain(format!("kummer parameters must satisfy a <= b, got a={a}, b={b}"));
    }
    if !(0.0..=KUMMER_MAX_ARG).contains(&x) {
        return domain(format!("kummer argument must lie in [0, {KUMMER_MAX_ARG}], got {x}"));
    }
    if a == b {
        return Ok(x.exp());
    }
    let (a, b) = (a as f64, b as f64);
    let mut sum = 1.0_f64;
    let mut comp = 0.0_f64;
    let mut term = 1.0_f64;
    let mut j = 0.0_f64;
    loop {
        let ratio = (a + j) * x / ((b + j) * (j + 1.0));
        term *= ratio;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        j += 1.0;
        if ratio < 1.0 && term <= sum * 1e-17 {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    Ok(sum)
}

/// Standard normal CDF.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
#[inline]
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `ln` of the bivariate normal density with the given means, standard
/// deviations and correlation.
pub fn ln_bivariate_normal_pdf(
    x: (f64, f64),
    mean: (f64, f64),
    sd: (f64, f64),
    rho: f64,
) -> f64 {
    let z1 = (x.0 - mean.0) / sd.0;
    let z2 = (x.1 - mean.1) / sd.1;
    let one_m = 1.0 - rho * rho;
    let q = (z1 * z1 - 2.0 * rho * z1 * z2 + z2 * z2) / one_m;
    -0.5 * q - (2.0 * std::f64::consts::PI * sd.0 * sd.1).ln() - 0.5 * one_m.ln()
}
