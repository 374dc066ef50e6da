use std::fs;
use std::path::Path;

use cointjump::calibration::{
    deseasonalize, fit_joint, fit_single_asset, CalibrationResult, DeseasonalizedSeries, FitOptions, JointKind,
    JointParam, Seasonality, SingleFit,
};
use cointjump::PriceSeries;
use serde::Serialize;

use super::{load, out_dir, report_written};
use crate::config::{missing, Loaded};
use crate::error::CliError;
use crate::output::num;
use crate::Common;

#[derive(Serialize)]
struct Marginal {
    source: String,
    observations: usize,
    seasonal: Seasonality,
    fit: SingleFit,
}

#[derive(Serialize)]
struct Report {
    marginals: [Marginal; 2],
    joint: Vec<CalibrationResult>,
}

fn read_series(loaded: &Loaded, p: Option<&Path>, key: &str) -> Result<(String, DeseasonalizedSeries), CliError> {
    let p = p.ok_or_else(|| CliError::Validation(format!("io.{key} is required")))?;
    let path = loaded.resolve(p);
    let file =
        fs::File::open(&path).map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let series = PriceSeries::from_csv(file).map_err(|e| CliError::Validation(format!("io.{key}: {e}")))?;
    Ok((p.display().to_string(), deseasonalize(&series)?))
}

fn kind_name(k: JointKind) -> &'static str {
    match k {
        JointKind::Independent => "independent",
        JointKind::Common => "common",
        JointKind::Cointegrated => "cointegrated",
    }
}

pub fn run(common: &Common) -> Result<(), CliError> {
    let loaded = load(common)?;
    let kinds = loaded.cfg.calibrate.as_ref().ok_or_else(|| missing("calibrate"))?.kinds.clone();
    if kinds.is_empty() {
        return Err(CliError::Validation("calibrate.kinds must name at least one kind".into()));
    }
    let (src1, d1) = read_series(&loaded, loaded.cfg.io.series1.as_deref(), "series1")?;
    let (src2, d2) = read_series(&loaded, loaded.cfg.io.series2.as_deref(), "series2")?;
    if d1.dates != d2.dates {
        return Err(CliError::Validation(format!(
            "series cover different dates: {}..{} vs {}..{}",
            d1.dates[0],
            d1.dates[d1.dates.len() - 1],
            d2.dates[0],
            d2.dates[d2.dates.len() - 1]
        )));
    }
    let opts = FitOptions::default();
    let f1 = fit_single_asset(&d1, &opts)?;
    let f2 = fit_single_asset(&d2, &opts)?;
    let mut joint = Vec::new();
    let mut rows = Vec::new();
    for kind in kinds {
        let r = fit_joint(&d1, &d2, &f1, &f2, kind, &opts)?;
        let param = match r.joint {
            JointParam::Independent => String::new(),
            JointParam::Common { lambda } => num(lambda),
            JointParam::Cointegrated { a } => num(a),
        };
        for c in &r.constraint_active {
            eprintln!("warning: {} fit: {c} is at its bound", kind_name(kind));
        }
        let t = (&r.theta1, &r.theta2);
        rows.push(vec![
            kind_name(kind).to_string(),
            num(t.0.k),
            num(t.0.sigma),
            num(t.0.lambda),
            num(t.0.jump_m),
            num(t.0.jump_nu),
            num(t.1.k),
            num(t.1.sigma),
            num(t.1.lambda),
            num(t.1.jump_m),
            num(t.1.jump_nu),
            num(r.rho_w),
            num(r.rho_d),
            param,
            num(r.loglik),
            r.converged.to_string(),
            r.constraint_active.join(";"),
        ]);
        println!(
            "{}: rho_w {:.4} rho_d {:.4} {} loglik {:.3}",
            kind_name(kind),
            r.rho_w,
            r.rho_d,
            match r.joint {
                JointParam::Independent => String::new(),
                JointParam::Common { lambda } => format!("lambda {lambda:.4}"),
                JointParam::Cointegrated { a } => format!("a {a:.4}"),
            },
            r.loglik
        );
        joint.push(r);
    }
    let mut out = out_dir(Some(&loaded), common, &loaded.hash)?;
    out.table(
        "calibration.csv",
        &[
            "kind", "k1", "sigma1", "lambda1", "m1", "nu1", "k2", "sigma2", "lambda2", "m2", "nu2", "rho_w", "rho_d",
            "coupling", "loglik", "converged", "constraint_active",
        ],
        &rows,
    )?;
    let report = Report {
        marginals: [
            Marginal { source: src1, observations: d1.u.len(), seasonal: d1.seasonal.clone(), fit: f1 },
            Marginal { source: src2, observations: d2.u.len(), seasonal: d2.seasonal.clone(), fit: f2 },
        ],
        joint,
    };
    out.json("calibration.json", &report)?;
    report_written(&out);
    Ok(())
}
