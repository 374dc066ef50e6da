//! Thin helpers over `astro_float::BigFloat` for the cancellation-heavy sums
//! in the joint Poisson law.
//!
//! All routines take the working precision in bits explicitly. Values are
//! converted back to `f64` only at the very end of a computation.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Working context: precision plus the constant cache needed by `exp`.
pub struct MpCtx {
    pub prec: usize,
    consts: Consts,
}

impl MpCtx {
    pub fn new(prec: usize) -> Result<Self> {
        let consts = Consts::new()
            .map_err(|e| Error::Domain(format!("multiprecision init failed: {e:?}")))?;
        Ok(Self { prec, consts })
    }

    #[inline]
    pub fn zero(&self) -> BigFloat {
        BigFloat::from_u64(0, self.prec)
    }

    #[inline]
    pub fn one(&self) -> BigFloat {
        BigFloat::from_u64(1, self.prec)
    }

    #[inline]
    pub fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.prec)
    }

    #[inline]
    pub fn u(&self, k: u64) -> BigFloat {
        BigFloat::from_u64(k, self.prec)
    }

    #[inline]
    pub fn add(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.add(y, self.prec, RM)
    }

    #[inline]
    pub fn sub(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.sub(y, self.prec, RM)
    }

    #[inline]
    pub fn mul(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.mul(y, self.prec, RM)
    }

    #[inline]
    pub fn div(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.div(y, self.prec, RM)
    }

    #[inline]
    pub fn mul_u(&self, x: &BigFloat, k: u64) -> BigFloat {
        x.mul(&self.u(k), self.prec, RM)
    }

    #[inline]
    pub fn div_u(&self, x: &BigFloat, k: u64) -> BigFloat {
        x.div(&self.u(k), self.prec, RM)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(self.prec, RM, &mut self.consts)
    }

    /// Poisson masses `π_0(α) ..= π_{k_max}(α)`. Built from `e^{-α}` by the
    /// forward ratio `α/k`; every step is a positive product, so the
    /// relative error stays at a few units of the working precision.
    pub fn poisson_vec(&mut self, alpha: f64, k_max: usize) -> Vec<BigFloat> {
        let mut out = Vec::with_capacity(k_max + 1);
        let al = self.f(alpha);
        let mut cur = self.exp(&al.neg());
        out.push(cur.clone());
        for k in 1..=k_max {
            cur = self.div_u(&self.mul(&cur, &al), k as u64);
            out.push(cur.clone());
        }
        out
    }

    /// `Φ(a; b; x)` for integers `0 <= a <= b`, `x >= 0`, by the forward
    /// Kummer series. All terms are nonnegative.
    pub fn kummer(&self, a: u64, b: u64, x: &BigFloat) -> BigFloat {
        if a == 0 || x.is_zero() {
            return self.one();
        }
        let mut sum = self.one();
        let mut term = self.one();
        let xf = to_f64(x);
        let cutoff = self.prec as i64 + 8;
        let mut j = 0u64;
        loop {
            term = self.mul(&term, x);
            term = self.mul_u(&term, a + j);
            term = self.div_u(&term, (b + j) * (j + 1));
            sum = self.add(&sum, &term);
            j += 1;
            let past_peak = ((a + j) as f64) * xf < ((b + j) * (j + 1)) as f64;
            if past_peak && exponent(&sum) - exponent(&term) > cutoff {
                break;
            }
        }
        sum
    }
}

fn exponent(x: &BigFloat) -> i64 {
    if x.is_zero() {
        i64::MIN / 2
    } else {
        x.exponent().map(i64::from).unwrap_or(0)
    }
}

/// `2^e` as a finite `f64` multiplier applied in bounded steps.
fn ldexp(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(e as i32)
}

/// Top 128 mantissa bits as a value in `[0.5, 1)`, with sign and exponent.
fn split(x: &BigFloat) -> Option<(f64, bool, i64)> {
    let (words, _, sign, e, _) = x.as_raw_parts()?;
    let len = words.len();
    if len == 0 {
        return None;
    }
    let hi = words[len - 1] as f64;
    let lo = if len > 1 { words[len - 2] as f64 } else { 0.0 };
    let mant = (hi + lo / 18446744073709551616.0) / 18446744073709551616.0;
    Some((mant, sign == Sign::Neg, i64::from(e)))
}

/// Nearest `f64` (up to one ulp). NaN maps to NaN.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_zero() {
        return 0.0;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    match split(x) {
        Some((mant, neg, e)) => {
            let v = ldexp(mant, e);
            if neg {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

/// `ln |x|`, finite for any nonzero value regardless of its exponent.
pub fn ln_abs(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    match split(x) {
        Some((mant, _, e)) => mant.ln() + e as f64 * std::f64::consts::LN_2,
        None => f64::NAN,
    }
}
