use serde::{Deserialize, Serialize};

use super::{black_scholes, black_scholes_delta, BsArgs, OptionKind, PriceResult};
use crate::bipoisson::truncation_level;
use crate::error::{domain, Result};
use crate::models::{GouLeg, MertonLeg, SsMarket};
use crate::specfun::{poisson_pmf_vec, poisson_upper_tail};

/// European option on a single leg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanillaSpec {
    pub kind: OptionKind,
    pub strike: f64,
    pub maturity: f64,
}

/// A single-asset model that admits the jump-conditioned series.
#[derive(Debug, Clone, Copy)]
pub enum VanillaModel<'a> {
    Merton(&'a MertonLeg),
    Gou(&'a GouLeg),
    Ss(&'a SsMarket),
}

/// Jump-conditioned Black–Scholes series. Merton spots grow at `r`; GOU and
/// Schwartz–Smith effective spots are forward-normalised, so their terms are
/// Black-76 (`q = r`). `delta1` is the sensitivity to the quoted input (spot
/// or forward at maturity).
pub fn price_vanilla(model: VanillaModel<'_>, r: f64, spec: &VanillaSpec, tail_tol: f64) -> Result<PriceResult> {
    let VanillaSpec { kind, strike, maturity: t } = *spec;
    if !(strike > 0.0) || !(t > 0.0) {
        return domain(format!("strike and maturity must be positive, got K = {strike}, T = {t}"));
    }
    let bs = |p0: f64, v: f64, q: f64| {
        let a = BsArgs { p0, k: strike, r, t, v, q };
        (black_scholes(&a, kind), black_scholes_delta(&a, kind))
    };
    let disc_k = strike * (-r * t).exp();
    match model {
        VanillaModel::Merton(leg) => {
            leg.validate()?;
            let n_max = truncation_level(leg.lambda * t, tail_tol)?;
            let w = poisson_pmf_vec(leg.lambda * t, n_max)?;
            let (mut value, mut delta) = (0.0, 0.0);
            for (n, &p) in w.iter().enumerate() {
                let s = leg.effective_spot(n, t);
                let (c, d) = bs(s, leg.terminal_variance(n, t), 0.0);
                value += p * c;
                delta += p * d * s / leg.s0;
            }
            let trunc_bound = match kind {
                OptionKind::Call => leg.spot_tail(n_max, t)?,
                OptionKind::Put => disc_k * poisson_upper_tail(n_max as u64, leg.lambda * t)?,
            };
            Ok(PriceResult { value, trunc_bound, terms_m: n_max, terms_n: 0, delta1: Some(delta), delta2: None })
        }
        VanillaModel::Gou(leg) => {
            leg.validate()?;
            let n_max = truncation_level(leg.lambda * t, tail_tol)?;
            let w = poisson_pmf_vec(leg.lambda * t, n_max)?;
            let (mut value, mut delta) = (0.0, 0.0);
            for (n, &p) in w.iter().enumerate() {
                let (c, d) = bs(leg.effective_spot(n, t)?, leg.terminal_variance(n, t), r);
                value += p * c;
                delta += p * d * leg.p(n, t).exp();
            }
            let trunc_bound = match kind {
                OptionKind::Call => (-r * t).exp() * leg.spot_tail(n_max, t)?,
                OptionKind::Put => disc_k * poisson_upper_tail(n_max as u64, leg.lambda * t)?,
            };
            Ok(PriceResult { value, trunc_bound, terms_m: n_max, terms_n: 0, delta1: Some(delta), delta2: None })
        }
        VanillaModel::Ss(mk) => {
            mk.validate()?;
            let comp = mk.compensator(t, tail_tol)?;
            let fwd = mk.fwd.value(t)?;
            let (mut value, mut delta) = (0.0, 0.0);
            for (n1, n2, p) in comp.pmf.iter() {
                if p == 0.0 {
                    continue;
                }
                let s = mk.effective_spot(n1, n2, t, comp.b)?;
                let (c, d) = bs(s, mk.terminal_variance(n1, n2, t), r);
                value += p * c;
                delta += p * d * s / fwd;
            }
            let trunc_bound = match kind {
                OptionKind::Call => (-r * t).exp() * fwd * comp.rel_bound,
                OptionKind::Put => disc_k * comp.pmf.tail_mass,
            };
            Ok(PriceResult {
                value,
                trunc_bound,
                terms_m: comp.pmf.m_max,
                terms_n: comp.pmf.n_max,
                delta1: Some(delta),
                delta2: None,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoisson::{Dependence, JumpPair};
    use crate::models::ForwardCurve;
    use approx::assert_relative_eq;

    const TOL: f64 = 1e-12;

    fn call(k: f64, t: f64) -> VanillaSpec {
        VanillaSpec { kind: OptionKind::Call, strike: k, maturity: t }
    }

    #[test]
    fn merton_without_jumps_is_black_scholes() {
        let leg = MertonLeg::new(100.0, 0.2, 0.0, 1.1, 0.1).unwrap();
        let r = price_vanilla(VanillaModel::Merton(&leg), 0.03, &call(95.0, 1.0), TOL).unwrap();
        let bs = black_scholes(&BsArgs { p0: 100.0, k: 95.0, r: 0.03, t: 1.0, v: 0.04, q: 0.0 }, OptionKind::Call);
        assert_relative_eq!(r.value, bs, max_relative = 1e-12);
    }

    #[test]
    fn merton_degenerate_jumps_are_black_scholes() {
        let leg = MertonLeg::new(100.0, 0.2, 20.0, 1.0, 1e-9).unwrap();
        let r = price_vanilla(VanillaModel::Merton(&leg), 0.0, &call(100.0, 1.0), TOL).unwrap();
        let bs = black_scholes(&BsArgs { p0: 100.0, k: 100.0, r: 0.0, t: 1.0, v: 0.04, q: 0.0 }, OptionKind::Call);
        assert_relative_eq!(r.value, bs, max_relative = 1e-8);
    }

    #[test]
    fn put_call_parity_holds_for_every_model() {
        let merton = MertonLeg::new(100.0, 0.2, 20.0, 1.1, 0.1).unwrap();
        let gou = GouLeg::new(ForwardCurve::flat(30.0).unwrap(), 42.5, 1.66, 95.32, -0.10, 0.16).unwrap();
        let jumps = JumpPair::new(10.0, 5.0, Dependence::Cointegrated { a: 0.4 }).unwrap();
        let ss = SsMarket::new(ForwardCurve::flat(50.0).unwrap(), 1.0, 0.3, 0.2, 0.5, 0.0, -0.05, 0.1, jumps).unwrap();
        let r = 0.04;
        let cases = [
            (VanillaModel::Merton(&merton), 100.0, 100.0 * (r * 0.5f64).exp()),
            (VanillaModel::Gou(&gou), 30.0, 30.0),
            (VanillaModel::Ss(&ss), 50.0, 50.0),
        ];
        for (model, k, fwd) in cases {
            let c = price_vanilla(model, r, &call(k, 0.5), TOL).unwrap();
            let p = price_vanilla(model, r, &VanillaSpec { kind: OptionKind::Put, ..call(k, 0.5) }, TOL).unwrap();
            let parity = (-r * 0.5f64).exp() * (fwd - k);
            assert!((c.value - p.value - parity).abs() < 1e-9, "{model:?}: {} vs {parity}", c.value - p.value);
            assert!(c.trunc_bound >= 0.0 && c.trunc_bound < 1e-8);
        }
    }

    #[test]
    fn deltas_match_finite_differences() {
        let leg = MertonLeg::new(100.0, 0.2, 20.0, 1.1, 0.1).unwrap();
        let spec = call(110.0, 1.0);
        let base = price_vanilla(VanillaModel::Merton(&leg), 0.01, &spec, TOL).unwrap();
        let h = 1e-2;
        let up = MertonLeg { s0: 100.0 + h, ..leg };
        let dn = MertonLeg { s0: 100.0 - h, ..leg };
        let fd = (price_vanilla(VanillaModel::Merton(&up), 0.01, &spec, TOL).unwrap().value
            - price_vanilla(VanillaModel::Merton(&dn), 0.01, &spec, TOL).unwrap().value)
            / (2.0 * h);
        assert_relative_eq!(base.delta1.unwrap(), fd, max_relative = 1e-7);

        let gou = GouLeg::new(ForwardCurve::flat(30.0).unwrap(), 42.5, 1.66, 95.32, -0.10, 0.16).unwrap();
        let spec = call(31.0, 0.25);
        let base = price_vanilla(VanillaModel::Gou(&gou), 0.0, &spec, TOL).unwrap();
        let bump = |f: f64| GouLeg { fwd: ForwardCurve::flat(f).unwrap(), ..gou.clone() };
        let h = 1e-3;
        let fd = (price_vanilla(VanillaModel::Gou(&bump(30.0 + h)), 0.0, &spec, TOL).unwrap().value
            - price_vanilla(VanillaModel::Gou(&bump(30.0 - h)), 0.0, &spec, TOL).unwrap().value)
            / (2.0 * h);
        assert_relative_eq!(base.delta1.unwrap(), fd, max_relative = 1e-6);
    }

    #[test]
    fn rejects_bad_contract() {
        let leg = MertonLeg::new(100.0, 0.2, 20.0, 1.1, 0.1).unwrap();
        assert!(price_vanilla(VanillaModel::Merton(&leg), 0.0, &call(0.0, 1.0), TOL).is_err());
        assert!(price_vanilla(VanillaModel::Merton(&leg), 0.0, &call(100.0, 0.0), TOL).is_err());
    }
}
