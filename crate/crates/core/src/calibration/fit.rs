use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;
use serde::{Deserialize, Serialize};

use super::density::{ln_density_1d, ln_density_2d, JointCorr, Theta};
use super::series::DeseasonalizedSeries;
use crate::bipoisson::{step_probs, Dependence, JumpPair};
use crate::error::{Error, Result};

/// Cost returned for parameter vectors outside the admissible region.
const PENALTY: f64 = 1e300;
/// Largest jump probability per step allowed during the search.
const MAX_JUMP_PROB: f64 = 0.5;
/// Correlations are searched in `(−RHO_CAP, RHO_CAP)`.
const RHO_CAP: f64 = 0.9999;
const MIN_OBS: usize = 100;

/// Optimizer settings shared by the marginal and joint fits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iters: u64,
    /// Stop when the simplex costs have this standard deviation.
    pub sd_tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { max_iters: 4000, sd_tolerance: 1e-9 }
    }
}

/// Maximum-likelihood marginal fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleFit {
    pub theta: Theta,
    /// Level of the latent factor relative to the residual series, absorbing
    /// the mean the deseasonalisation removed.
    pub offset: f64,
    pub loglik: f64,
    pub converged: bool,
    /// Number of starts that ran to convergence.
    pub starts_converged: usize,
}

/// Joint parameter beyond the two correlations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum JointParam {
    Independent,
    Common { lambda: f64 },
    Cointegrated { a: f64 },
}

/// Which jump coupling `fit_joint` estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JointKind {
    Independent,
    Common,
    Cointegrated,
}

/// Two-step estimate: marginals held fixed, joint parameters fitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub theta1: Theta,
    pub theta2: Theta,
    pub rho_w: f64,
    pub rho_d: f64,
    pub joint: JointParam,
    pub loglik: f64,
    pub converged: bool,
    /// Names of parameters that ended on the boundary of their range.
    pub constraint_active: Vec<String>,
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

struct Optimum {
    x: Vec<f64>,
    cost: f64,
    converged: bool,
}

fn minimize<C>(cost: C, start: &[f64], step: &[f64], opts: &FitOptions) -> Result<Optimum>
where
    C: CostFunction<Param = Vec<f64>, Output = f64>,
{
    let mut simplex = vec![start.to_vec()];
    for (i, s) in step.iter().enumerate() {
        let mut v = start.to_vec();
        v[i] += s;
        simplex.push(v);
    }
    let solver = NelderMead::new(simplex).with_sd_tolerance(opts.sd_tolerance).map_err(|e| Error::Fit(e.to_string()))?;
    let res = Executor::new(cost, solver)
        .configure(|s| s.max_iters(opts.max_iters))
        .run()
        .map_err(|e| Error::Fit(e.to_string()))?;
    let state = res.state();
    let x = state.get_best_param().cloned().unwrap_or_else(|| start.to_vec());
    let converged =
        matches!(state.get_termination_status(), TerminationStatus::Terminated(TerminationReason::SolverConverged));
    Ok(Optimum { x, cost: state.get_best_cost(), converged })
}

/// Unconstrained coordinates `(ln k, ln σ, logit(λΔt / 0.5), M, ln ν, offset)`.
struct SingleCost<'a> {
    u: &'a [f64],
    dt: f64,
}

impl SingleCost<'_> {
    fn decode(&self, x: &[f64]) -> (Theta, f64) {
        let theta = Theta {
            k: x[0].exp(),
            sigma: x[1].exp(),
            lambda: MAX_JUMP_PROB * logistic(x[2]) / self.dt,
            jump_m: x[3],
            jump_nu: x[4].exp(),
        };
        (theta, x[5])
    }

    fn encode(&self, theta: &Theta, offset: f64) -> Vec<f64> {
        vec![
            theta.k.ln(),
            theta.sigma.ln(),
            logit(theta.lambda * self.dt / MAX_JUMP_PROB),
            theta.jump_m,
            theta.jump_nu.ln(),
            offset,
        ]
    }

    fn loglik(&self, theta: &Theta, offset: f64) -> f64 {
        // The jump damping runs on the step clock: one step of decay.
        self.u.windows(2).map(|w| ln_density_1d(w[1], w[0], theta, offset, self.dt, self.dt)).sum()
    }
}

impl CostFunction for SingleCost<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        if x.iter().any(|v| !v.is_finite() || v.abs() > 50.0) {
            return Ok(PENALTY);
        }
        let (theta, offset) = self.decode(x);
        let ll = self.loglik(&theta, offset);
        Ok(if ll.is_finite() { -ll } else { PENALTY })
    }
}

/// Least-squares AR(1) fit `u' = c + φu + e`, returning `(φ, c, sd(e))`.
fn ar1(u: &[f64]) -> (f64, f64, f64) {
    let n = (u.len() - 1) as f64;
    let (xs, ys) = (&u[..u.len() - 1], &u[1..]);
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let phi = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let c = my - phi * mx;
    let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - c - phi * x).powi(2)).sum();
    (phi, c, (sse / n).sqrt())
}

/// Maximises the marginal mixture likelihood from a grid of starts: three
/// jump probabilities `{0.03, 0.12, 0.3}` times three jump means
/// `{−2s, 0, 2s}`, with `k`, `σ` and the level from an AR(1) regression of
/// residual standard deviation `s`. Each start is polished by a restart.
pub fn fit_single_asset(d: &DeseasonalizedSeries, opts: &FitOptions) -> Result<SingleFit> {
    fit_single_series(&d.u, d.dt, opts)
}

/// [`fit_single_asset`] on a bare residual series with step `dt`.
pub fn fit_single_series(u: &[f64], dt: f64, opts: &FitOptions) -> Result<SingleFit> {
    if u.len() < MIN_OBS {
        return Err(Error::Fit(format!("need at least {MIN_OBS} observations, got {}", u.len())));
    }
    if !(dt > 0.0) {
        return Err(Error::Fit(format!("time step must be positive, got {dt}")));
    }
    let (phi, c, s) = ar1(u);
    if !(s > 1e-10) {
        return Err(Error::Fit("series has no stochastic variation".into()));
    }
    let cost = SingleCost { u, dt };
    let k0 = ((1.0 - phi.clamp(0.05, 0.999)) / dt).max(1e-3);
    let level = if (1.0 - phi).abs() > 1e-6 { c / (1.0 - phi) } else { 0.0 };
    let mut best: Option<Optimum> = None;
    let mut converged_count = 0;
    for pj in [0.03, 0.12, 0.3] {
        for msign in [-2.0, 0.0, 2.0] {
            let theta = Theta {
                k: k0,
                sigma: 0.8 * s / dt.sqrt(),
                lambda: pj / dt,
                jump_m: msign * s,
                jump_nu: 2.0 * s,
            };
            let x0 = cost.encode(&theta, -level);
            let step = [0.3, 0.3, 0.5, s, 0.3, s];
            let first = minimize(SingleCost { u, dt }, &x0, &step, opts)?;
            let polished = minimize(SingleCost { u, dt }, &first.x, &step.map(|v| 0.1 * v), opts)?;
            if polished.converged {
                converged_count += 1;
            }
            if best.as_ref().is_none_or(|b| polished.cost < b.cost) {
                best = Some(polished);
            }
        }
    }
    let opt = best.expect("at least one start");
    if opt.cost >= PENALTY {
        return Err(Error::Fit("no start produced a finite likelihood".into()));
    }
    let (theta, offset) = cost.decode(&opt.x);
    Ok(SingleFit { theta, offset, loglik: -opt.cost, converged: opt.converged, starts_converged: converged_count })
}

/// Unconstrained coordinates `(atanh ρ^W, atanh ρ^D, logit of the coupling)`.
struct JointCost<'a> {
    u1: &'a [f64],
    u2: &'a [f64],
    fits: (&'a SingleFit, &'a SingleFit),
    kind: JointKind,
    dt: f64,
}

impl JointCost<'_> {
    fn decode(&self, x: &[f64]) -> (JointCorr, JointParam) {
        let corr = JointCorr { rho_w: RHO_CAP * x[0].tanh(), rho_d: RHO_CAP * x[1].tanh() };
        let (t1, t2) = (&self.fits.0.theta, &self.fits.1.theta);
        let joint = match self.kind {
            JointKind::Independent => JointParam::Independent,
            JointKind::Common => JointParam::Common { lambda: t1.lambda.min(t2.lambda) * logistic(x[2]) },
            JointKind::Cointegrated => JointParam::Cointegrated { a: logistic(x[2]) },
        };
        (corr, joint)
    }

    fn pair(&self, joint: JointParam) -> JumpPair {
        let dependence = match joint {
            JointParam::Independent => Dependence::Independent,
            JointParam::Common { lambda } => Dependence::Common { lambda },
            JointParam::Cointegrated { a } => Dependence::Cointegrated { a },
        };
        JumpPair { lambda1: self.fits.0.theta.lambda, lambda2: self.fits.1.theta.lambda, dependence }
    }

    fn loglik(&self, corr: JointCorr, joint: JointParam) -> f64 {
        let Ok(probs) = step_probs(&self.pair(joint), self.dt) else {
            return f64::NEG_INFINITY;
        };
        let thetas = (&self.fits.0.theta, &self.fits.1.theta);
        let offsets = (self.fits.0.offset, self.fits.1.offset);
        (1..self.u1.len())
            .map(|i| {
                ln_density_2d(
                    (self.u1[i], self.u2[i]),
                    (self.u1[i - 1], self.u2[i - 1]),
                    thetas,
                    offsets,
                    corr,
                    &probs,
                    self.dt,
                    self.dt,
                )
            })
            .sum()
    }
}

impl CostFunction for JointCost<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        if x.iter().any(|v| !v.is_finite() || v.abs() > 30.0) {
            return Ok(PENALTY);
        }
        let (corr, joint) = self.decode(x);
        let ll = self.loglik(corr, joint);
        Ok(if ll.is_finite() { -ll } else { PENALTY })
    }
}

/// Second estimation step: with both marginal fits fixed, maximises the
/// bivariate mixture likelihood over `ρ^W`, `ρ^D` and the coupling
/// parameter (`λ` for common jumps in `[0, min(λ1, λ2)]`, `a` in `[0, 1]`).
/// Starts: `ρ^W ∈ {−0.5, 0, 0.5, 0.9}` times `(ρ^D, coupling) ∈
/// {(0, 0.2), (0.5, 0.6)}`.
pub fn fit_joint(
    d1: &DeseasonalizedSeries,
    d2: &DeseasonalizedSeries,
    fit1: &SingleFit,
    fit2: &SingleFit,
    kind: JointKind,
    opts: &FitOptions,
) -> Result<CalibrationResult> {
    if d1.dates != d2.dates {
        return Err(Error::Data("the two series must cover the same dates".into()));
    }
    if (d1.dt - d2.dt).abs() > 1e-15 {
        return Err(Error::Data("the two series must share the time step".into()));
    }
    fit_joint_series(&d1.u, &d2.u, d1.dt, fit1, fit2, kind, opts)
}

/// [`fit_joint`] on bare aligned residual series.
pub fn fit_joint_series(
    u1: &[f64],
    u2: &[f64],
    dt: f64,
    fit1: &SingleFit,
    fit2: &SingleFit,
    kind: JointKind,
    opts: &FitOptions,
) -> Result<CalibrationResult> {
    if u1.len() != u2.len() {
        return Err(Error::Data(format!("series lengths differ: {} vs {}", u1.len(), u2.len())));
    }
    if u1.len() < MIN_OBS {
        return Err(Error::Fit(format!("need at least {MIN_OBS} observations, got {}", u1.len())));
    }
    let cost = JointCost { u1, u2, fits: (fit1, fit2), kind, dt };
    let dim = if kind == JointKind::Independent { 2 } else { 3 };
    let mut best: Option<Optimum> = None;
    for rw in [-0.5, 0.0, 0.5, 0.9] {
        for (rd, c) in [(0.0, 0.2), (0.5, 0.6)] {
            let x0 = [(rw / RHO_CAP).atanh(), (rd / RHO_CAP).atanh(), logit(c)];
            let step = [0.3, 0.3, 0.5];
            let run = |x: &[f64], s: &[f64]| {
                minimize(JointCost { u1, u2, fits: (fit1, fit2), kind, dt }, &x[..dim], &s[..dim], opts)
            };
            let first = run(&x0, &step)?;
            let polished = run(&first.x, &step.map(|v| 0.1 * v))?;
            if best.as_ref().is_none_or(|b| polished.cost < b.cost) {
                best = Some(polished);
            }
        }
    }
    let opt = best.expect("at least one start");
    if opt.cost >= PENALTY {
        return Err(Error::Fit("no start produced a finite joint likelihood".into()));
    }
    let mut x = opt.x.clone();
    x.resize(3, 0.0);
    let (corr, joint) = cost.decode(&x);
    let mut constraint_active = Vec::new();
    if corr.rho_w.abs() > 0.999 {
        constraint_active.push("rho_w".to_string());
    }
    if corr.rho_d.abs() > 0.999 {
        constraint_active.push("rho_d".to_string());
    }
    let cap = fit1.theta.lambda.min(fit2.theta.lambda);
    match joint {
        JointParam::Common { lambda } if lambda < 1e-3 * cap || lambda > (1.0 - 1e-3) * cap => {
            constraint_active.push("lambda".to_string())
        }
        JointParam::Cointegrated { a } if !(1e-3..=1.0 - 1e-3).contains(&a) => constraint_active.push("a".to_string()),
        _ => {}
    }
    Ok(CalibrationResult {
        theta1: fit1.theta,
        theta2: fit2.theta,
        rho_w: corr.rho_w,
        rho_d: corr.rho_d,
        joint,
        loglik: -opt.cost,
        converged: opt.converged,
        constraint_active,
    })
}
