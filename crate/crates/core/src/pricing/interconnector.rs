use chrono::{Datelike, NaiveDate};
use serde::Serialize;

use super::{price_spread, Direction, PriceResult, SpreadSpec};
use crate::error::{domain, Result};
use crate::models::{year_fraction, GouMarket};

/// Subtotal of daily options delivering in one calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonthlyValue {
    pub year: i32,
    pub month: u32,
    pub days: usize,
    pub value: f64,
    pub trunc_bound: f64,
}

/// Interconnector capacity valued as a strip of daily spread options.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterconnectorResult {
    pub value: f64,
    pub trunc_bound: f64,
    pub daily: Vec<(NaiveDate, PriceResult)>,
    pub monthly: Vec<MonthlyValue>,
}

/// Sum of zero-strike daily spread options, each maturing on its delivery
/// day measured from `valuation`.
pub fn price_interconnector(
    market: &GouMarket,
    valuation: NaiveDate,
    days: &[NaiveDate],
    direction: Direction,
    tail_tol: f64,
) -> Result<InterconnectorResult> {
    if days.is_empty() {
        return domain("no delivery days");
    }
    let mut sorted = days.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut daily = Vec::with_capacity(sorted.len());
    let mut monthly: Vec<MonthlyValue> = Vec::new();
    for day in sorted {
        if day <= valuation {
            return domain(format!("delivery day {day} is not after the valuation date {valuation}"));
        }
        let spec = SpreadSpec { maturity: year_fraction(valuation, day), strike: 0.0 };
        let r = price_spread(market, &spec, direction, tail_tol)?;
        match monthly.last_mut() {
            Some(m) if m.year == day.year() && m.month == day.month() => {
                m.days += 1;
                m.value += r.value;
                m.trunc_bound += r.trunc_bound;
            }
            _ => monthly.push(MonthlyValue {
                year: day.year(),
                month: day.month(),
                days: 1,
                value: r.value,
                trunc_bound: r.trunc_bound,
            }),
        }
        daily.push((day, r));
    }
    Ok(InterconnectorResult {
        value: daily.iter().map(|(_, r)| r.value).sum(),
        trunc_bound: daily.iter().map(|(_, r)| r.trunc_bound).sum(),
        daily,
        monthly,
    })
}

/// Every calendar day from `first` to `last` inclusive.
pub fn delivery_days(first: NaiveDate, last: NaiveDate) -> Vec<NaiveDate> {
    first.iter_days().take_while(|d| *d <= last).collect()
}
