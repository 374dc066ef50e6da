use cointjump::bipoisson::common_jump_correlation;
use cointjump::pricing::{margrabe, price_spread_with_pmf};
use cointjump::reference::{merton_market, no_jump_params, Case, TABLE2, TABLE3, TABLE3_TOL};
use cointjump::{Dependence, Direction, JointPmf, MertonMarket, SpreadSpec, TwoLegMarket};

use super::{numerics, out_dir, report_written};
use crate::config::{sha256_hex, NumericsCfg};
use crate::error::CliError;
use crate::output::{num, OutDir};
use crate::{Common, Target};

const CASES: [Case; 2] = [Case::A, Case::B];
/// Weights at which the three dependence kinds are compared with unit mean
/// jumps.
const FIG1_CHECK: [f64; 3] = [0.1, 0.5, 0.9];
const FIG1_TOL: f64 = 0.01;
/// Weight of the cointegrated panels of the pmf figure.
const FIG2_A: f64 = 0.5;

fn ci(case: Case) -> usize {
    match case {
        Case::A => 0,
        Case::B => 1,
    }
}

fn value(mk: &MertonMarket, pmf: &JointPmf) -> Result<f64, CliError> {
    let spec = SpreadSpec { maturity: 1.0, strike: 0.0 };
    Ok(price_spread_with_pmf(mk, &spec, Direction::FirstOverSecond, pmf)?.value)
}

fn priced(mk: &MertonMarket, n: &NumericsCfg) -> Result<(f64, JointPmf), CliError> {
    let pmf = mk.jump_pair().joint_pmf(1.0, n.tail_tol)?;
    Ok((value(mk, &pmf)?, pmf))
}

pub fn run(common: &Common, target: Target) -> Result<(), CliError> {
    if common.config.is_some() {
        return Err(CliError::Validation("reproduce uses built-in parameters and takes no --config".into()));
    }
    let n = numerics(&NumericsCfg::default(), common)?;
    let label = format!("reproduce {target:?} tail_tol={}", n.tail_tol);
    let mut out = out_dir(None, common, &sha256_hex(label.as_bytes()))?;
    let misses = match target {
        Target::Table2 => table2(&mut out, &n)?,
        Target::Table3 => table3(&mut out, &n)?,
        Target::Fig1 => fig1(&mut out, &n)?,
        Target::Fig2 => fig2(&mut out, &n)?,
    };
    report_written(&out);
    if misses.is_empty() {
        println!("all comparisons pass");
        Ok(())
    } else {
        for m in &misses {
            println!("MISS {m}");
        }
        Err(CliError::Mismatch(format!("{} comparison(s) outside tolerance", misses.len())))
    }
}

fn table2(out: &mut OutDir, n: &NumericsCfg) -> Result<Vec<String>, CliError> {
    let mut rows = Vec::new();
    let mut misses = Vec::new();
    for (case, nj, nj_tol, ind, ind_tol) in TABLE2 {
        let (s1, s2, rho) = no_jump_params(case);
        let v = (s1 * s1 + s2 * s2 - 2.0 * rho * s1 * s2).max(0.0);
        let m = margrabe(100.0, 100.0, v, 1.0);
        let (p, _) = priced(&merton_market(case, Dependence::Independent)?, n)?;
        for (what, got, want, tol) in [("no_jumps", m, nj, nj_tol), ("independent", p, ind, ind_tol)] {
            let pass = (got - want).abs() <= tol;
            if !pass {
                misses.push(format!("case {} {what}: {got:.4} vs {want} ± {tol}", case.name()));
            }
            rows.push(vec![case.name().into(), what.into(), num(got), num(want), num(tol), pass.to_string()]);
            println!("case {} {what:<12} {got:>9.4}  expected {want:>6} ± {tol}", case.name());
        }
    }
    out.table("table2.csv", &["case", "quantity", "computed", "expected", "tolerance", "pass"], &rows)?;
    Ok(misses)
}

fn table3(out: &mut OutDir, n: &NumericsCfg) -> Result<Vec<String>, CliError> {
    let mut rows = Vec::new();
    let mut misses = Vec::new();
    for r in TABLE3 {
        for case in CASES {
            let i = ci(case);
            let common = merton_market(case, Dependence::Common { lambda: r.lambda[i] })?;
            let (pc, _) = priced(&common, n)?;
            let (pk, pmf) = priced(&merton_market(case, Dependence::Cointegrated { a: r.a })?, n)?;
            let rho_c = 100.0 * common_jump_correlation(r.lambda[i], common.leg1.lambda, common.leg2.lambda)?;
            let rho_k = 100.0 * pmf.correlation();
            let checks = [
                ("common", pc, r.common[i], TABLE3_TOL),
                ("cointegrated", pk, r.cointegrated[i], TABLE3_TOL),
                ("rho_common", rho_c, r.rho_pct[i], 1.0),
                ("rho_cointegrated", rho_k, r.rho_pct[i], 1.0),
            ];
            let mut pass = true;
            for (what, got, want, tol) in checks {
                if (got - want).abs() > tol {
                    pass = false;
                    misses.push(format!("case {} a={} {what}: {got:.4} vs {want} ± {tol}", case.name(), r.a));
                }
            }
            println!(
                "a={:.2} case {}  common {pc:>8.4} ({:>5})  cointegrated {pk:>8.4} ({:>5})  rho {rho_c:>5.1}/{rho_k:>5.1} ({})",
                r.a,
                case.name(),
                r.common[i],
                r.cointegrated[i],
                r.rho_pct[i]
            );
            rows.push(vec![
                num(r.a),
                case.name().into(),
                num(r.lambda[i]),
                num(pc),
                num(r.common[i]),
                num(pk),
                num(r.cointegrated[i]),
                num(rho_c),
                num(rho_k),
                num(r.rho_pct[i]),
                pass.to_string(),
            ]);
        }
    }
    out.table(
        "table3.csv",
        &[
            "a", "case", "lambda_common", "common", "common_expected", "cointegrated", "cointegrated_expected",
            "rho_common_pct", "rho_cointegrated_pct", "rho_expected_pct", "pass",
        ],
        &rows,
    )?;
    Ok(misses)
}

fn fig1(out: &mut OutDir, n: &NumericsCfg) -> Result<Vec<String>, CliError> {
    let mut rows = Vec::new();
    let mut misses = Vec::new();
    for case in CASES {
        let i = ci(case);
        for r in TABLE3 {
            let mut prices = Vec::new();
            for dep in [Dependence::Independent, Dependence::Common { lambda: r.lambda[i] }, Dependence::Cointegrated { a: r.a }] {
                let mut mk = merton_market(case, dep)?;
                mk.leg1.jump_m = 1.0;
                mk.leg2.jump_m = 1.0;
                prices.push(priced(&mk, n)?.0);
            }
            let hi = prices.iter().cloned().fold(f64::MIN, f64::max);
            let lo = prices.iter().cloned().fold(f64::MAX, f64::min);
            let gap = hi / lo - 1.0;
            let checked = FIG1_CHECK.iter().any(|a| (a - r.a).abs() < 1e-12);
            if checked && gap > FIG1_TOL {
                misses.push(format!(
                    "case {} a={}: independent {:.4} common {:.4} cointegrated {:.4}, gap {:.2}% > {}%",
                    case.name(),
                    r.a,
                    prices[0],
                    prices[1],
                    prices[2],
                    100.0 * gap,
                    100.0 * FIG1_TOL
                ));
            }
            println!(
                "case {} a={:.2}  {:>8.4} {:>8.4} {:>8.4}  gap {:.2}%",
                case.name(),
                r.a,
                prices[0],
                prices[1],
                prices[2],
                100.0 * gap
            );
            rows.push(vec![
                case.name().into(),
                num(r.a),
                num(prices[0]),
                num(prices[1]),
                num(prices[2]),
                num(gap),
                checked.to_string(),
            ]);
        }
    }
    out.table("fig1.csv", &["case", "a", "independent", "common", "cointegrated", "rel_gap", "checked"], &rows)?;
    Ok(misses)
}

fn fig2(out: &mut OutDir, n: &NumericsCfg) -> Result<Vec<String>, CliError> {
    for case in CASES {
        for dep in [Dependence::Independent, Dependence::Cointegrated { a: FIG2_A }] {
            let mk = merton_market(case, dep)?;
            let pmf = mk.jump_pair().joint_pmf(1.0, n.tail_tol)?;
            out.csv(&format!("fig2_case{}_{}.csv", case.name(), dep.name()), |buf| Ok(pmf.write_csv(buf)?))?;
            println!(
                "case {} {}: {} x {} cells, correlation {:.4}",
                case.name(),
                dep.name(),
                pmf.m_max + 1,
                pmf.n_max + 1,
                pmf.correlation()
            );
        }
    }
    Ok(Vec::new())
}
