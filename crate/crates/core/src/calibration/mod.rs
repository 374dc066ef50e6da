//! Two-step maximum-likelihood calibration of mean-reverting jump legs from
//! daily prices: deseasonalisation, marginal mixture-likelihood fits, then a
//! joint fit of the correlations and the jump coupling.

mod density;
mod fit;
mod series;
mod synthetic;

pub use density::{transition_density_1d, Theta};
pub use fit::{
    fit_joint, fit_joint_series, fit_single_asset, fit_single_series, CalibrationResult, FitOptions, JointKind,
    JointParam, SingleFit,
};
pub use series::{deseasonalize, DeseasonalizedSeries, PriceSeries, Seasonality};
pub use synthetic::{price_series_from, simulate_euler, simulate_pair_euler};
