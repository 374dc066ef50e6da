use cointjump::models::{GouLeg, GouMarket, MertonLeg, MertonMarket, SsMarket};
use cointjump::pricing::{
    delivery_days, mc_spread, mc_vanilla, price_interconnector, price_spread, price_vanilla, McEstimate, PathModel,
    VanillaModel, VanillaSpec,
};
use cointjump::{Direction, JumpPair, PriceResult, SpreadSpec, TwoLegMarket};
use serde::Serialize;

use super::{load, numerics, out_dir, report_written};
use crate::config::{missing, Loaded, ModelCfg, NumericsCfg, OptionCfg};
use crate::error::CliError;
use crate::output::{num, opt, OutDir};
use crate::Common;

enum Market {
    Merton(MertonMarket),
    Gou(GouMarket),
    Ss(SsMarket),
}

fn build(loaded: &Loaded, pair: JumpPair) -> Result<Market, CliError> {
    let model = loaded.cfg.model.as_ref().ok_or_else(|| missing("model"))?;
    Ok(match model {
        ModelCfg::Merton { r, rho_w, rho_d, leg1, leg2 } => {
            let l1 = MertonLeg::new(leg1.s0, leg1.sigma, pair.lambda1, leg1.jump_m, leg1.jump_nu)?;
            let l2 = MertonLeg::new(leg2.s0, leg2.sigma, pair.lambda2, leg2.jump_m, leg2.jump_nu)?;
            Market::Merton(MertonMarket::new(l1, l2, *rho_w, *rho_d, *r, pair.dependence)?)
        }
        ModelCfg::Gou { r, rho_w, rho_d, valuation, leg1, leg2 } => {
            let mut legs = Vec::new();
            for (i, (leg, lambda)) in [(leg1, pair.lambda1), (leg2, pair.lambda2)].into_iter().enumerate() {
                let key = format!("model.leg{}", i + 1);
                let fwd = loaded.curve(leg.forward, leg.curve.as_deref(), *valuation, &key)?;
                legs.push(GouLeg::new(fwd, leg.k, leg.sigma, lambda, leg.jump_m, leg.jump_nu)?);
            }
            let l2 = legs.pop().unwrap();
            let l1 = legs.pop().unwrap();
            Market::Gou(GouMarket::new(l1, l2, *rho_w, *rho_d, *r, pair.dependence)?)
        }
        ModelCfg::Ss { valuation, forward, curve, k, sigma1, sigma2, rho, mu, jump_m, jump_nu, .. } => {
            let fwd = loaded.curve(*forward, curve.as_deref(), *valuation, "model")?;
            Market::Ss(SsMarket::new(fwd, *k, *sigma1, *sigma2, *rho, *mu, *jump_m, *jump_nu, pair)?)
        }
    })
}

fn rate(loaded: &Loaded) -> f64 {
    match loaded.cfg.model {
        Some(ModelCfg::Merton { r, .. } | ModelCfg::Gou { r, .. } | ModelCfg::Ss { r, .. }) => r,
        None => 0.0,
    }
}

#[derive(Serialize)]
struct Report<'a> {
    contract: &'a str,
    model: &'a str,
    dependence: &'a str,
    result: PriceResult,
    monte_carlo: Option<McEstimate>,
}

pub fn run(common: &Common) -> Result<(), CliError> {
    let loaded = load(common)?;
    let n = numerics(&loaded.cfg.numerics, common)?;
    let pair = loaded.dependence()?;
    let market = build(&loaded, pair)?;
    let option = loaded.cfg.option.ok_or_else(|| missing("option"))?;
    let mut out = out_dir(Some(&loaded), common, &loaded.hash)?;
    let model_name = match market {
        Market::Merton(_) => "merton",
        Market::Gou(_) => "gou",
        Market::Ss(_) => "ss",
    };
    let (contract, result, mc) = match option {
        OptionCfg::Spread { maturity, direction } => {
            let spec = SpreadSpec { maturity, strike: 0.0 };
            let (res, mc) = match &market {
                Market::Merton(m) => spread(m, &spec, direction, &n)?,
                Market::Gou(m) => spread(m, &spec, direction, &n)?,
                Market::Ss(_) => {
                    return Err(CliError::Validation("the ss model has one asset; spreads need merton or gou".into()))
                }
            };
            ("spread", res, mc)
        }
        OptionCfg::Vanilla { payoff, strike, maturity, leg } => {
            let spec = VanillaSpec { kind: payoff, strike, maturity };
            let model = match (&market, leg) {
                (Market::Merton(m), 1) => VanillaModel::Merton(&m.leg1),
                (Market::Merton(m), 2) => VanillaModel::Merton(&m.leg2),
                (Market::Gou(m), 1) => VanillaModel::Gou(&m.leg1),
                (Market::Gou(m), 2) => VanillaModel::Gou(&m.leg2),
                (Market::Ss(m), _) => VanillaModel::Ss(m),
                (_, l) => return Err(CliError::Validation(format!("option.leg must be 1 or 2, got {l}"))),
            };
            let r = rate(&loaded);
            let res = price_vanilla(model, r, &spec, n.tail_tol)?;
            let mc = if n.n_paths > 0 { Some(mc_vanilla(model, r, &spec, n.n_paths, n.seed, n.tail_tol)?) } else { None };
            ("vanilla", res, mc)
        }
        OptionCfg::Interconnector { valuation, first_day, last_day, direction } => {
            let Market::Gou(m) = &market else {
                return Err(CliError::Validation("interconnector contracts need the gou model".into()));
            };
            if last_day < first_day {
                return Err(CliError::Validation("option.last_day precedes option.first_day".into()));
            }
            let ic = price_interconnector(m, valuation, &delivery_days(first_day, last_day), direction, n.tail_tol)?;
            write_interconnector(&mut out, &ic)?;
            let res = PriceResult {
                value: ic.value,
                trunc_bound: ic.trunc_bound,
                terms_m: ic.daily.iter().map(|d| d.1.terms_m).max().unwrap_or(0),
                terms_n: ic.daily.iter().map(|d| d.1.terms_n).max().unwrap_or(0),
                delta1: None,
                delta2: None,
            };
            ("interconnector", res, None)
        }
    };
    let row = vec![
        contract.to_string(),
        model_name.to_string(),
        pair.dependence.name().to_string(),
        num(result.value),
        num(result.trunc_bound),
        result.terms_m.to_string(),
        result.terms_n.to_string(),
        opt(result.delta1),
        opt(result.delta2),
        opt(mc.map(|m| m.estimate)),
        opt(mc.map(|m| m.std_error)),
        mc.map(|m| m.n_paths.to_string()).unwrap_or_default(),
    ];
    out.table(
        "price.csv",
        &[
            "contract", "model", "dependence", "value", "trunc_bound", "terms_m", "terms_n", "delta1", "delta2",
            "mc_estimate", "mc_std_error", "mc_paths",
        ],
        &[row],
    )?;
    out.json(
        "price.json",
        &Report { contract, model: model_name, dependence: pair.dependence.name(), result, monte_carlo: mc },
    )?;
    println!("{contract} ({model_name}, {}): value {:.6} (truncation bound {:.1e})", pair.dependence.name(), result.value, result.trunc_bound);
    if let Some(m) = mc {
        println!("monte carlo: {:.6} ± {:.6} ({} paths)", m.estimate, m.std_error, m.n_paths);
    }
    report_written(&out);
    Ok(())
}

fn spread<M: TwoLegMarket + PathModel>(
    market: &M,
    spec: &SpreadSpec,
    direction: Direction,
    n: &NumericsCfg,
) -> Result<(PriceResult, Option<McEstimate>), CliError> {
    let res = price_spread(market, spec, direction, n.tail_tol)?;
    let mc = if n.n_paths > 0 { Some(mc_spread(market, spec, direction, n.n_paths, n.seed)?) } else { None };
    Ok((res, mc))
}

fn write_interconnector(out: &mut OutDir, ic: &cointjump::pricing::InterconnectorResult) -> Result<(), CliError> {
    let daily: Vec<Vec<String>> = ic
        .daily
        .iter()
        .map(|(d, r)| vec![d.to_string(), num(r.value), num(r.trunc_bound)])
        .collect();
    out.table("daily.csv", &["date", "value", "trunc_bound"], &daily)?;
    let monthly: Vec<Vec<String>> = ic
        .monthly
        .iter()
        .map(|m| vec![format!("{}-{:02}", m.year, m.month), m.days.to_string(), num(m.value), num(m.trunc_bound)])
        .collect();
    out.table("monthly.csv", &["month", "days", "value", "trunc_bound"], &monthly)
}
