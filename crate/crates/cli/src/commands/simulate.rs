use cointjump::calibration::{price_series_from, simulate_pair_euler, Seasonality};
use cointjump::models::DAYS_PER_YEAR;
use cointjump::rng::path_rng;

use super::{load, numerics, out_dir, report_written};
use crate::config::missing;
use crate::error::CliError;
use crate::output::num;
use crate::Common;

pub fn run(common: &Common) -> Result<(), CliError> {
    let loaded = load(common)?;
    let n = numerics(&loaded.cfg.numerics, common)?;
    let sim = loaded.cfg.simulate.clone().ok_or_else(|| missing("simulate"))?;
    let pair = loaded.dependence()?;
    let (u1, u2) = simulate_pair_euler(
        (&sim.theta1, &sim.theta2),
        sim.rho_w,
        sim.rho_d,
        &pair,
        sim.steps,
        1.0 / DAYS_PER_YEAR,
        &mut path_rng(n.seed, 0),
    )?;
    let mut out = out_dir(Some(&loaded), common, &loaded.hash)?;
    for (i, (u, level)) in [(&u1, sim.level1), (&u2, sim.level2)].into_iter().enumerate() {
        let seasonal = Seasonality {
            intercept: level,
            weekday: sim.weekday,
            month: [0.0; 12],
            base_month: 1,
            trend: 0.0,
            origin: sim.start,
        };
        let series = price_series_from(sim.start, u, &seasonal)?;
        let rows: Vec<Vec<String>> =
            series.dates.iter().zip(&series.prices).map(|(d, p)| vec![d.to_string(), num(*p)]).collect();
        out.table(&format!("series{}.csv", i + 1), &["date", "price"], &rows)?;
    }
    println!("simulated {} daily steps from {} (seed {})", sim.steps, sim.start, n.seed);
    report_written(&out);
    Ok(())
}
