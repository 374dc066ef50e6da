use std::io::Write;

use cointjump::Dependence;

use super::{load, numerics, out_dir, report_written};
use crate::config::missing;
use crate::error::CliError;
use crate::Common;

pub fn run(common: &Common) -> Result<(), CliError> {
    let loaded = load(common)?;
    let num = numerics(&loaded.cfg.numerics, common)?;
    let pair = loaded.dependence()?;
    let t = loaded.cfg.pmf.ok_or_else(|| missing("pmf"))?.t;
    let pmf = pair.joint_pmf(t, num.tail_tol)?;
    let mut out = out_dir(Some(&loaded), common, &loaded.hash)?;
    out.csv("pmf.csv", |buf| {
        let coupling = match pair.dependence {
            Dependence::Independent => String::new(),
            Dependence::Common { lambda } => format!(" lambda={lambda}"),
            Dependence::Cointegrated { a } => format!(" a={a}"),
        };
        writeln!(
            buf,
            "# kind={} lambda1={} lambda2={}{coupling} t={t} tail_mass={:e} m_max={} n_max={}",
            pair.dependence.name(),
            pair.lambda1,
            pair.lambda2,
            pmf.tail_mass,
            pmf.m_max,
            pmf.n_max
        )?;
        pmf.write_csv(buf)?;
        Ok(())
    })?;
    println!(
        "{} pmf at t = {t}: {} x {} cells, tail mass {:.3e}, correlation {:.6}",
        pair.dependence.name(),
        pmf.m_max + 1,
        pmf.n_max + 1,
        pmf.tail_mass,
        pmf.correlation()
    );
    report_written(&out);
    Ok(())
}
