use std::io::Read;

use chrono::{Datelike, NaiveDate};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::DAYS_PER_YEAR;

/// Equally spaced dated prices.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    pub dates: Vec<NaiveDate>,
    pub prices: Vec<f64>,
    /// Spacing in years.
    pub dt: f64,
}

#[derive(Deserialize)]
struct Row {
    date: NaiveDate,
    price: f64,
}

impl PriceSeries {
    pub fn new(dates: Vec<NaiveDate>, prices: Vec<f64>) -> Result<Self> {
        if dates.len() != prices.len() || dates.len() < 2 {
            return Err(Error::Data("need at least two dated prices of equal count".into()));
        }
        if let Some(w) = dates.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::Data(format!("dates must be strictly increasing: {} then {}", w[0], w[1])));
        }
        if let Some((d, p)) = dates.iter().zip(&prices).find(|(_, p)| !(**p > 0.0 && p.is_finite())) {
            return Err(Error::Data(format!("price on {d} must be positive, got {p}")));
        }
        let step = (dates[1] - dates[0]).num_days();
        if let Some(w) = dates.windows(2).find(|w| (w[1] - w[0]).num_days() != step) {
            return Err(Error::Data(format!("uneven spacing between {} and {}", w[0], w[1])));
        }
        Ok(Self { dates, prices, dt: step as f64 / DAYS_PER_YEAR })
    }

    /// Reads a `date,price` CSV with ISO-8601 dates.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(reader);
        let mut dates = Vec::new();
        let mut prices = Vec::new();
        for row in rdr.deserialize() {
            let row: Row = row?;
            dates.push(row.date);
            prices.push(row.price);
        }
        Self::new(dates, prices)
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }
}

/// Regression of log prices on weekday and month indicators and a linear
/// trend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seasonality {
    pub intercept: f64,
    /// Effects of Tuesday..Sunday relative to Monday.
    pub weekday: [f64; 6],
    /// Effects of each calendar month relative to `base_month`; zero for
    /// months absent from the fitting window.
    pub month: [f64; 12],
    pub base_month: u32,
    /// Slope per year measured from `origin`.
    pub trend: f64,
    pub origin: NaiveDate,
}

impl Seasonality {
    /// Deterministic log-price component on `date`.
    pub fn value(&self, date: NaiveDate) -> f64 {
        let wd = date.weekday().num_days_from_monday() as usize;
        let mut v = self.intercept + self.month[date.month0() as usize];
        if wd > 0 {
            v += self.weekday[wd - 1];
        }
        v + self.trend * (date - self.origin).num_days() as f64 / DAYS_PER_YEAR
    }
}

/// Residual log prices after removing the deterministic component.
#[derive(Debug, Clone, PartialEq)]
pub struct DeseasonalizedSeries {
    pub dates: Vec<NaiveDate>,
    pub u: Vec<f64>,
    pub dt: f64,
    pub seasonal: Seasonality,
}

/// Ordinary least squares of `ln p` on an intercept, weekday and month
/// indicators and a trend; indicators for months absent from the window are
/// dropped.
pub fn deseasonalize(series: &PriceSeries) -> Result<DeseasonalizedSeries> {
    let n = series.len();
    let origin = series.dates[0];
    let mut present = [false; 12];
    for d in &series.dates {
        present[d.month0() as usize] = true;
    }
    let base_month = present.iter().position(|p| *p).expect("non-empty series");
    let months: Vec<usize> = (0..12).filter(|&m| present[m] && m != base_month).collect();
    let weekly = (series.dates[1] - series.dates[0]).num_days() == 1;
    let n_wd = if weekly { 6 } else { 0 };
    let cols = 1 + n_wd + months.len() + 1;
    if n < 2 * cols {
        return Err(Error::Fit(format!("{n} observations cannot identify {cols} seasonal terms")));
    }
    let mut x = DMatrix::<f64>::zeros(n, cols);
    for (i, d) in series.dates.iter().enumerate() {
        x[(i, 0)] = 1.0;
        let wd = d.weekday().num_days_from_monday() as usize;
        if weekly && wd > 0 {
            x[(i, wd)] = 1.0;
        }
        if let Some(j) = months.iter().position(|&m| m == d.month0() as usize) {
            x[(i, 1 + n_wd + j)] = 1.0;
        }
        x[(i, cols - 1)] = (*d - origin).num_days() as f64 / DAYS_PER_YEAR;
    }
    let y = DVector::from_iterator(n, series.prices.iter().map(|p| p.ln()));
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if svd.singular_values.min() <= 1e-10 * smax {
        return Err(Error::Fit("seasonal regressors are rank deficient".into()));
    }
    let beta = svd.solve(&y, 1e-12 * smax).map_err(|e| Error::Fit(e.to_string()))?;
    let mut seasonal = Seasonality {
        intercept: beta[0],
        weekday: [0.0; 6],
        month: [0.0; 12],
        base_month: base_month as u32 + 1,
        trend: beta[cols - 1],
        origin,
    };
    for j in 0..n_wd {
        seasonal.weekday[j] = beta[1 + j];
    }
    for (j, &m) in months.iter().enumerate() {
        seasonal.month[m] = beta[1 + n_wd + j];
    }
    let u = series.dates.iter().zip(&series.prices).map(|(d, p)| p.ln() - seasonal.value(*d)).collect();
    Ok(DeseasonalizedSeries { dates: series.dates.clone(), u, dt: series.dt, seasonal })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn days(n: usize) -> Vec<NaiveDate> {
        NaiveDate::from_ymd_opt(2014, 1, 1).unwrap().iter_days().take(n).collect()
    }

    #[test]
    fn reads_csv() {
        let text = "date,price\n2016-01-01,30.5\n2016-01-02, 31\n";
        let s = PriceSeries::from_csv(text.as_bytes()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.prices, vec![30.5, 31.0]);
        assert!((s.dt - 1.0 / 365.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_series() {
        let d = days(3);
        assert!(PriceSeries::new(vec![d[1], d[0]], vec![1.0, 1.0]).is_err());
        assert!(PriceSeries::new(vec![d[0], d[1]], vec![1.0, -1.0]).is_err());
        assert!(PriceSeries::new(vec![d[0], d[1], d[1] + chrono::Days::new(2)], vec![1.0; 3]).is_err());
        assert!(PriceSeries::from_csv("date,price\n2016-13-01,1\n".as_bytes()).is_err());
    }

    #[test]
    fn constant_series_leaves_nothing() {
        let s = PriceSeries::new(days(400), vec![42.0; 400]).unwrap();
        let d = deseasonalize(&s).unwrap();
        assert!(d.u.iter().all(|u| u.abs() < 1e-12));
    }

    #[test]
    fn weekly_cycle_is_absorbed() {
        let dates = days(400);
        let prices: Vec<f64> = (0..400)
            .map(|i| (3.0 + 0.2 * (2.0 * std::f64::consts::PI * i as f64 / 7.0).sin()).exp())
            .collect();
        let input_var = {
            let l: Vec<f64> = prices.iter().map(|p| p.ln()).collect();
            let m = l.iter().sum::<f64>() / l.len() as f64;
            l.iter().map(|x| (x - m).powi(2)).sum::<f64>() / l.len() as f64
        };
        let d = deseasonalize(&PriceSeries::new(dates, prices).unwrap()).unwrap();
        let res_var = d.u.iter().map(|x| x * x).sum::<f64>() / d.u.len() as f64;
        assert!(res_var < 1e-6 * input_var);
    }

    #[test]
    fn short_window_is_rejected() {
        let s = PriceSeries::new(days(10), vec![1.0; 10]).unwrap();
        assert!(deseasonalize(&s).is_err());
    }
}
