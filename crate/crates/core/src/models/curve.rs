//! Piecewise-constant forward curves on delivery buckets.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Days per year used to turn calendar dates into model time.
pub const DAYS_PER_YEAR: f64 = 365.0;

/// Year fraction between two dates on the calendar-day basis.
pub fn year_fraction(from: NaiveDate, to: NaiveDate) -> f64 {
    (to - from).num_days() as f64 / DAYS_PER_YEAR
}

/// `t ↦ F(0, t)`, constant on each bucket `[starts[i], starts[i+1])`, the
/// last bucket ending at `end`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForwardCurve {
    starts: Vec<f64>,
    prices: Vec<f64>,
    end: f64,
}

impl ForwardCurve {
    pub fn new(starts: Vec<f64>, prices: Vec<f64>, end: f64) -> Result<Self> {
        if starts.is_empty() || starts.len() != prices.len() {
            return Err(Error::Curve("bucket starts and prices must be non-empty and equal length".into()));
        }
        if starts.windows(2).any(|w| !(w[0] < w[1])) || !(end > *starts.last().unwrap()) {
            return Err(Error::Curve("bucket boundaries must be strictly increasing".into()));
        }
        if let Some(p) = prices.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
            return Err(Error::Curve(format!("forward prices must be positive, got {p}")));
        }
        Ok(Self { starts, prices, end })
    }

    /// A single price on `[0, ∞)`.
    pub fn flat(price: f64) -> Result<Self> {
        Self::new(vec![0.0], vec![price], f64::INFINITY)
    }

    /// Daily buckets from dated prices: the price quoted for day `d` applies
    /// on `[d, d + 1 day)`, measured from `valuation`.
    pub fn from_daily(valuation: NaiveDate, quotes: &[(NaiveDate, f64)]) -> Result<Self> {
        let mut q = quotes.to_vec();
        q.sort_by_key(|x| x.0);
        if q.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Curve("duplicate delivery dates".into()));
        }
        let starts: Vec<f64> = q.iter().map(|(d, _)| year_fraction(valuation, *d)).collect();
        let end = starts.last().map(|s| s + 1.0 / DAYS_PER_YEAR).unwrap_or(0.0);
        Self::new(starts, q.iter().map(|x| x.1).collect(), end)
    }

    /// Support `[start, end]` in years.
    pub fn support(&self) -> (f64, f64) {
        (self.starts[0], self.end)
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.support();
        if !(t >= lo && t <= hi) {
            return Err(Error::Curve(format!("t = {t} outside curve support [{lo}, {hi}]")));
        }
        let i = self.starts.partition_point(|s| *s <= t).saturating_sub(1);
        Ok(self.prices[i])
    }
}
