//! Exact joint law of `(N1(t), N2(t))`.
//!
//! The cointegrated law is a finite combination of Poisson weights, binomial
//! weights and integer Kummer functions. Its alternating sums cancel by many
//! orders of magnitude (relative cancellation beyond `1e40` is routine at
//! moderate intensities), so they are evaluated in multiprecision. The
//! working precision is chosen a posteriori: every pass records the largest
//! term entering each cell, and a pass whose implied absolute error exceeds
//! [`TARGET_ABS_ERR`] is repeated at the precision that error calls for.

use std::io::Write;

use astro_float::BigFloat;

use super::DependenceParams;
use crate::error::{domain, Error, Result};
use crate::specfun::multiprec::{ln_abs, to_f64, MpCtx};
use crate::specfun::{poisson_pmf_vec, poisson_upper_tail};

/// Default bound on the neglected Poisson tail of each marginal.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// Absolute accuracy targeted for every probability.
const TARGET_ABS_ERR: f64 = 1e-18;
const START_PREC: usize = 128;
const MAX_PREC: usize = 8192;
/// Entries in `[-CLIP_FLOOR, 0)` are rounding residue and clip to zero.
const CLIP_FLOOR: f64 = 1e-6;

/// Truncated joint probability matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    pub t: f64,
    pub m_max: usize,
    pub n_max: usize,
    /// Row-major `(m_max + 1) × (n_max + 1)`, entry `(m, n)` at `m * (n_max + 1) + n`.
    probs: Vec<f64>,
    /// `P{N1 > m_max} + P{N2 > n_max}`.
    pub tail_mass: f64,
    /// Bits of precision used for the cointegrated sums (0 when not needed).
    pub precision_bits: usize,
}

impl JointPmf {
    fn from_parts(t: f64, m_max: usize, n_max: usize, probs: Vec<f64>, tail_mass: f64) -> Self {
        debug_assert_eq!(probs.len(), (m_max + 1) * (n_max + 1));
        Self { t, m_max, n_max, probs, tail_mass, precision_bits: 0 }
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> f64 {
        if m > self.m_max || n > self.n_max {
            return 0.0;
        }
        self.probs[m * (self.n_max + 1) + n]
    }

    pub fn row(&self, m: usize) -> &[f64] {
        let w = self.n_max + 1;
        &self.probs[m * w..(m + 1) * w]
    }

    /// Iterates `(m, n, prob)` in m-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let w = self.n_max + 1;
        self.probs.iter().enumerate().map(move |(i, &p)| (i / w, i % w, p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Marginal of `N1` on `0..=m_max`.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..=self.m_max).map(|m| self.row(m).iter().sum()).collect()
    }

    /// Marginal of `N2` on `0..=n_max`.
    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_max + 1];
        for (_, n, p) in self.iter() {
            out[n] += p;
        }
        out
    }

    /// Correlation of the counts computed from the truncated matrix.
    pub fn correlation(&self) -> f64 {
        let (mut s, mut e1, mut e2, mut e11, mut e22, mut e12) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for (m, n, p) in self.iter() {
            let (x, y) = (m as f64, n as f64);
            s += p;
            e1 += p * x;
            e2 += p * y;
            e11 += p * x * x;
            e22 += p * y * y;
            e12 += p * x * y;
        }
        let (e1, e2, e11, e22, e12) = (e1 / s, e2 / s, e11 / s, e22 / s, e12 / s);
        let v1 = e11 - e1 * e1;
        let v2 = e22 - e2 * e2;
        if v1 <= 0.0 || v2 <= 0.0 {
            return 0.0;
        }
        ((e12 - e1 * e2) / (v1 * v2).sqrt()).clamp(-1.0, 1.0)
    }

    /// Writes `m,n,prob` rows (m-major) after a header line.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["m", "n", "prob"])?;
        for (m, n, p) in self.iter() {
            wtr.write_record(&[m.to_string(), n.to_string(), format!("{p:.17e}")])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Smallest `k >= ceil(α + 10√α) + 10` with `P{Poisson(α) > k} <= tail_tol`.
pub fn truncation_level(alpha: f64, tail_tol: f64) -> Result<usize> {
    let mut k = (alpha + 10.0 * alpha.sqrt()).ceil() as usize + 10;
    while poisson_upper_tail(k as u64, alpha)? > tail_tol {
        k += 1;
    }
    Ok(k)
}

fn check_inputs(t: f64, tail_tol: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("horizon must be positive, got {t}"));
    }
    if !(tail_tol > 0.0 && tail_tol <= 1e-4) {
        return domain(format!("tail tolerance must lie in (0, 1e-4], got {tail_tol}"));
    }
    Ok(())
}

fn marginal_tails(l1t: f64, l2t: f64, m_max: usize, n_max: usize) -> Result<f64> {
    Ok(poisson_upper_tail(m_max as u64, l1t)? + poisson_upper_tail(n_max as u64, l2t)?)
}

/// Product law of two independent Poisson counts.
pub(crate) fn independent_pmf(l1: f64, l2: f64, t: f64, tail_tol: f64) -> Result<JointPmf> {
    check_inputs(t, tail_tol)?;
    let (l1t, l2t) = (l1 * t, l2 * t);
    let m_max = truncation_level(l1t, tail_tol)?;
    let n_max = truncation_level(l2t, tail_tol)?;
    let p1 = poisson_pmf_vec(l1t, m_max)?;
    let p2 = poisson_pmf_vec(l2t, n_max)?;
    let probs = p1.iter().flat_map(|x| p2.iter().map(move |y| x * y)).collect();
    Ok(JointPmf::from_parts(t, m_max, n_max, probs, marginal_tails(l1t, l2t, m_max, n_max)?))
}

/// Common-shock law: `N_i = N + N_i^X` with `N ~ Poisson(λt)` shared.
pub(crate) fn common_pmf(lambda: f64, l1: f64, l2: f64, t: f64, tail_tol: f64) -> Result<JointPmf> {
    check_inputs(t, tail_tol)?;
    if !(lambda >= 0.0) || lambda > l1.min(l2) {
        return domain(format!("common intensity {lambda} must lie in [0, min({l1}, {l2})]"));
    }
    let (l1t, l2t) = (l1 * t, l2 * t);
    let m_max = truncation_level(l1t, tail_tol)?;
    let n_max = truncation_level(l2t, tail_tol)?;
    let pc = poisson_pmf_vec(lambda * t, m_max.min(n_max))?;
    let px1 = poisson_pmf_vec((l1 - lambda) * t, m_max)?;
    let px2 = poisson_pmf_vec((l2 - lambda) * t, n_max)?;
    let w = n_max + 1;
    let mut probs = vec![0.0; (m_max + 1) * w];
    for (c, &pcn) in pc.iter().enumerate() {
        for m in c..=m_max {
            let pm = pcn * px1[m - c];
            for n in c..=n_max {
                probs[m * w + n] += pm * px2[n - c];
            }
        }
    }
    Ok(JointPmf::from_parts(t, m_max, n_max, probs, marginal_tails(l1t, l2t, m_max, n_max)?))
}

/// Endpoint `a = 1`: `N2` is a thinning-free time change of `N1`, so the pair
/// is a common shock with intensity `min(λ1, λ2)`.
fn unit_weight_pmf(l1: f64, l2: f64, t: f64, tail_tol: f64) -> Result<JointPmf> {
    common_pmf(l1.min(l2), l1, l2, t, tail_tol)
}

/// Joint law of the cointegrated pair at time `t`.
pub fn joint_pmf(params: &DependenceParams, t: f64, tail_tol: f64) -> Result<JointPmf> {
    check_inputs(t, tail_tol)?;
    let DependenceParams { lambda1: l1, lambda2: l2, a } = *params;
    if a == 0.0 {
        return independent_pmf(l1, l2, t, tail_tol);
    }
    if a == 1.0 {
        return unit_weight_pmf(l1, l2, t, tail_tol);
    }
    let branch = if params.gamma() >= 1.0 { Branch::Q } else { Branch::Abc };
    let m_max = truncation_level(l1 * t, tail_tol)?;
    let n_max = truncation_level(l2 * t, tail_tol)?;
    let (vals, prec) = evaluate(params, t, m_max, n_max, branch)?;
    let probs = finalize(vals, n_max)?;
    let mut pmf = JointPmf::from_parts(
        t,
        m_max,
        n_max,
        probs,
        marginal_tails(l1 * t, l2 * t, m_max, n_max)?,
    );
    pmf.precision_bits = prec;
    Ok(pmf)
}

/// At `γ = 1` both closed forms apply; returns the largest entrywise gap.
pub fn joint_pmf_boundary_check(params: &DependenceParams, t: f64) -> Result<f64> {
    check_inputs(t, DEFAULT_TAIL_TOL)?;
    let g = params.gamma();
    if (g - 1.0).abs() > 1e-12 || params.a <= 0.0 || params.a >= 1.0 {
        return domain(format!("boundary check needs γ = 1 and 0 < a < 1, got γ = {g}"));
    }
    let m_max = truncation_level(params.lambda1 * t, DEFAULT_TAIL_TOL)?;
    let n_max = truncation_level(params.lambda2 * t, DEFAULT_TAIL_TOL)?;
    let (q, _) = evaluate(params, t, m_max, n_max, Branch::Q)?;
    let (abc, _) = evaluate(params, t, m_max, n_max, Branch::Abc)?;
    Ok(q.iter().zip(&abc).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// `Corr[N1(t), N2(t)]` from the cointegrated joint law.
pub fn poisson_correlation(params: &DependenceParams, t: f64) -> Result<f64> {
    Ok(joint_pmf(params, t, DEFAULT_TAIL_TOL)?.correlation())
}

fn finalize(vals: Vec<f64>, n_max: usize) -> Result<Vec<f64>> {
    let w = n_max + 1;
    vals.into_iter()
        .enumerate()
        .map(|(i, v)| {
            if v >= 0.0 {
                Ok(v.min(1.0))
            } else if v >= -CLIP_FLOOR {
                Ok(0.0)
            } else {
                Err(Error::Instability { m: i / w, n: i % w, value: v })
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    /// `γ >= 1`.
    Q,
    /// `γ <= 1`.
    Abc,
}

/// Runs the chosen closed form, raising the precision until the recorded
/// error bound meets the target.
fn evaluate(
    params: &DependenceParams,
    t: f64,
    m_max: usize,
    n_max: usize,
    branch: Branch,
) -> Result<(Vec<f64>, usize)> {
    let mut prec = START_PREC;
    loop {
        let mut ctx = MpCtx::new(prec)?;
        let (vals, ln_err) = match branch {
            Branch::Q => q_branch(&mut ctx, params, t, m_max, n_max),
            Branch::Abc => abc_branch(&mut ctx, params, t, m_max, n_max),
        };
        let target = TARGET_ABS_ERR.ln();
        if ln_err <= target {
            return Ok((vals, prec));
        }
        if prec >= MAX_PREC {
            return Err(Error::Instability { m: m_max, n: n_max, value: ln_err.exp() });
        }
        let extra = ((ln_err - target) / std::f64::consts::LN_2).ceil() as usize + 32;
        prec = ((prec + extra).div_ceil(64) * 64).min(MAX_PREC);
    }
}

/// Rows `β_ℓ(n)`, `n = 0..=n_top`, by the Bernoulli-trial recursion.
fn binomial_rows(ctx: &MpCtx, a: f64, n_top: usize) -> Vec<Vec<BigFloat>> {
    let pa = ctx.f(a);
    let qa = ctx.sub(&ctx.one(), &pa);
    let mut rows = vec![vec![ctx.one()]];
    for n in 1..=n_top {
        let prev = &rows[n - 1];
        let mut row = Vec::with_capacity(n + 1);
        for l in 0..=n {
            let stay = if l < n { ctx.mul(&prev[l], &pa) } else { ctx.zero() };
            let step = if l > 0 { ctx.mul(&prev[l - 1], &qa) } else { ctx.zero() };
            row.push(ctx.add(&stay, &step));
        }
        rows.push(row);
    }
    rows
}

/// Pascal triangle rows `0..=top`, columns `0..=cols`.
fn pascal(ctx: &MpCtx, top: usize, cols: usize) -> Vec<Vec<BigFloat>> {
    let mut rows: Vec<Vec<BigFloat>> = Vec::with_capacity(top + 1);
    for r in 0..=top {
        let mut row = Vec::with_capacity(cols + 1);
        for c in 0..=cols {
            let v = if c > r {
                ctx.zero()
            } else if c == 0 || c == r {
                ctx.one()
            } else {
                ctx.add(&rows[r - 1][c - 1], &rows[r - 1][c])
            };
            row.push(v);
        }
        rows.push(row);
    }
    rows
}

#[inline]
fn signed_add(ctx: &MpCtx, acc: &BigFloat, term: &BigFloat, negative: bool) -> BigFloat {
    if negative {
        ctx.sub(acc, term)
    } else {
        ctx.add(acc, term)
    }
}

/// Rounding allowance per cell: a generous multiple of the number of
/// operations feeding each term.
fn ln_slack(ctx: &MpCtx, ops: usize) -> f64 {
    (8.0 * ops as f64).ln() - ctx.prec as f64 * std::f64::consts::LN_2
}

/// `γ >= 1`: `p = Q_{n,n}` on the diagonal, `Q_{m,n} − Q_{m,n+1}` below it.
///
/// `Q_{m,0} = π_m(λ1 t)` and for `1 <= n <= m`
/// `Q_{m,n} = Σ_{j=n}^{m} (−1)^{n+j} C(j−1, n−1) a^{−j} π_{m−j}(λ1 t) G(j, n)`,
/// `G(j, n) = Σ_{ℓ=0}^{n} β_ℓ(n) π_{j+ℓ}(λ2 t) Φ(j+1; j+ℓ+1; λ2 t)`.
fn q_branch(
    ctx: &mut MpCtx,
    params: &DependenceParams,
    t: f64,
    m_max: usize,
    n_max: usize,
) -> (Vec<f64>, f64) {
    let DependenceParams { lambda1, lambda2, a } = *params;
    let nq = (n_max + 1).min(m_max);
    let pmu = ctx.poisson_vec(lambda1 * t, m_max);
    let plam = ctx.poisson_vec(lambda2 * t, m_max + nq);
    let beta = binomial_rows(ctx, a, nq);
    let x = ctx.f(lambda2 * t);
    let inv_a = ctx.div(&ctx.one(), &ctx.f(a));
    let ln_inv_a = -a.ln();

    // W(j, n) = C(j−1, n−1) a^{−j} G(j, n) for 1 <= n <= min(j, nq).
    let mut w_tab: Vec<Vec<BigFloat>> = vec![Vec::new(); m_max + 1];
    let mut ln_w: Vec<Vec<f64>> = vec![Vec::new(); m_max + 1];
    let mut binom_row = vec![ctx.one()]; // C(j−1, ·)
    let mut inv_a_pow = ctx.one();
    for j in 1..=m_max {
        if j > 1 {
            let mut next = Vec::with_capacity(j);
            for c in 0..j {
                let left = if c > 0 { binom_row[c - 1].clone() } else { ctx.zero() };
                let right = if c < binom_row.len() { binom_row[c].clone() } else { ctx.zero() };
                next.push(ctx.add(&left, &right));
            }
            binom_row = next;
        }
        inv_a_pow = ctx.mul(&inv_a_pow, &inv_a);
        let top = j.min(nq);
        let f_row: Vec<BigFloat> = (0..=top)
            .map(|l| ctx.mul(&plam[j + l], &ctx.kummer((j + 1) as u64, (j + l + 1) as u64, &x)))
            .collect();
        let mut row = vec![ctx.zero(); top + 1];
        let mut ln_row = vec![f64::NEG_INFINITY; top + 1];
        for n in 1..=top {
            let mut g = ctx.zero();
            for l in 0..=n {
                g = ctx.add(&g, &ctx.mul(&beta[n][l], &f_row[l]));
            }
            let v = ctx.mul(&ctx.mul(&binom_row[n - 1], &inv_a_pow), &g);
            ln_row[n] = ln_abs(&binom_row[n - 1]) + j as f64 * ln_inv_a + ln_abs(&g);
            row[n] = v;
        }
        w_tab[j] = row;
        ln_w[j] = ln_row;
    }

    let ln_pmu: Vec<f64> = pmu.iter().map(ln_abs).collect();
    // q[m][n] for n <= min(m, nq).
    let mut q: Vec<Vec<BigFloat>> = Vec::with_capacity(m_max + 1);
    let mut ln_qerr: Vec<Vec<f64>> = Vec::with_capacity(m_max + 1);
    let slack_base = 2 * (m_max + nq + 2);
    for m in 0..=m_max {
        let top = m.min(nq);
        let mut row = Vec::with_capacity(top + 1);
        let mut err_row = Vec::with_capacity(top + 1);
        row.push(pmu[m].clone());
        err_row.push(ln_pmu[m] + ln_slack(ctx, slack_base));
        for n in 1..=top {
            let mut acc = ctx.zero();
            let mut ln_big = f64::NEG_INFINITY;
            for j in n..=m {
                let term = ctx.mul(&pmu[m - j], &w_tab[j][n]);
                acc = signed_add(ctx, &acc, &term, (n + j) % 2 == 1);
                ln_big = ln_big.max(ln_pmu[m - j] + ln_w[j][n]);
            }
            row.push(acc);
            err_row.push(ln_big + ln_slack(ctx, slack_base * (m - n + 1)));
        }
        q.push(row);
        ln_qerr.push(err_row);
    }

    let w = n_max + 1;
    let mut out = vec![0.0; (m_max + 1) * w];
    let mut worst = f64::NEG_INFINITY;
    for m in 0..=m_max {
        for n in 0..=n_max.min(m) {
            let (v, e) = if n == m {
                (q[m][n].clone(), ln_qerr[m][n])
            } else {
                (
                    ctx.sub(&q[m][n], &q[m][n + 1]),
                    ln_add(ln_qerr[m][n], ln_qerr[m][n + 1]),
                )
            };
            out[m * w + n] = to_f64(&v);
            worst = worst.max(e);
        }
    }
    (out, worst)
}

fn ln_add(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `γ <= 1`: combination of the positive sums `A`, `B` and the alternating
/// sum `C`, with `w = λ2 t − a λ1 t`.
///
/// * `A_{m,n} = π_m(λ1 t) Σ_{k=0}^{n} β_k(n) P{Poisson(w) >= k}`
/// * `B_{m,n} = π_m(λ1 t) Σ_{k=0}^{n−m} π_k(w/a) Σ_{ℓ=0}^{n+1} β_ℓ(n+1) w^ℓ k!/(k+ℓ)! Φ(ℓ; k+ℓ+1; (1−a)w/a)` for `n >= m`
/// * `C_{m,n} = Σ_{d=1}^{n} (−1)^{d−1} π_{m+d}(λ1 t) a^d H(m,d,n) E(d,n)` for `m >= n >= 1`, `C_{m,0} = 0`, with
///   `H = Σ_{k=n}^{m} C(k+d−1, k) Φ(k+d; m+d+1; a λ1 t)` and `E = Σ_{ℓ=d}^{n} β_ℓ(n) π_{ℓ−d}(λ2 t)`.
fn abc_branch(
    ctx: &mut MpCtx,
    params: &DependenceParams,
    t: f64,
    m_max: usize,
    n_max: usize,
) -> (Vec<f64>, f64) {
    let DependenceParams { lambda1, lambda2, a } = *params;
    let mu_t = lambda1 * t;
    let lam_t = lambda2 * t;
    let w_f = (lam_t - a * mu_t).max(0.0);
    let nc = n_max + 1;
    let pmu = ctx.poisson_vec(mu_t, m_max + nc + 1);
    let plam = ctx.poisson_vec(lam_t, nc);
    let pw = ctx.poisson_vec(w_f, nc + 1);
    let pwa = ctx.poisson_vec(w_f / a, n_max);
    let beta = binomial_rows(ctx, a, nc + 1);
    let ln_pmu: Vec<f64> = pmu.iter().map(ln_abs).collect();
    let slack_base = 2 * (m_max + nc + 2);

    // A: Abar(n) for n <= n_max + 1.
    let mut tail_ge = Vec::with_capacity(nc + 1);
    let mut cdf = ctx.zero();
    for p in pw.iter().take(nc + 1) {
        tail_ge.push(ctx.sub(&ctx.one(), &cdf));
        cdf = ctx.add(&cdf, p);
    }
    let abar: Vec<BigFloat> = (0..=nc)
        .map(|n| {
            let mut s = ctx.zero();
            for k in 0..=n {
                s = ctx.add(&s, &ctx.mul(&beta[n][k], &tail_ge[k]));
            }
            s
        })
        .collect();
    let d_abar: Vec<BigFloat> = (0..=n_max).map(|n| ctx.sub(&abar[n], &abar[n + 1])).collect();

    // B: R(k, ℓ) = w^ℓ k!/(k+ℓ)! Φ(ℓ; k+ℓ+1; y), g(k, n') = Σ_ℓ β_ℓ(n') R(k, ℓ).
    let wb = ctx.f(w_f);
    let y = ctx.div(&ctx.mul(&ctx.f(1.0 - a), &wb), &ctx.f(a));
    let mut sb: Vec<Vec<BigFloat>> = Vec::with_capacity(n_max + 1); // sb[n][K], K <= n
    {
        let r_tab: Vec<Vec<BigFloat>> = (0..=n_max)
            .map(|k| {
                let mut coef = ctx.one();
                (0..=nc)
                    .map(|l| {
                        if l > 0 {
                            coef = ctx.div_u(&ctx.mul(&coef, &wb), (k + l) as u64);
                        }
                        ctx.mul(&coef, &ctx.kummer(l as u64, (k + l + 1) as u64, &y))
                    })
                    .collect()
            })
            .collect();
        for n in 0..=n_max {
            let np = n + 1;
            let mut acc = ctx.zero();
            let mut row = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let mut g = ctx.zero();
                for l in 0..=np {
                    g = ctx.add(&g, &ctx.mul(&beta[np][l], &r_tab[k][l]));
                }
                acc = ctx.add(&acc, &ctx.mul(&pwa[k], &g));
                row.push(acc.clone());
            }
            sb.push(row);
        }
    }
    let b_val = |ctx: &MpCtx, m: usize, n: usize| ctx.mul(&pmu[m], &sb[n][n - m]);

    // C: Φ(α; β; aλ1 t) for 1 <= α < β <= m_max + nc + 1, indexed phi[β][α].
    let xc = ctx.f(a * mu_t);
    let b_top = m_max + nc + 1;
    let phi: Vec<Vec<BigFloat>> = (0..=b_top)
        .map(|b| (0..b).map(|al| if al == 0 { ctx.one() } else { ctx.kummer(al as u64, b as u64, &xc) }).collect())
        .collect();
    let binom = pascal(ctx, m_max + nc, nc);
    // E(d, n) for 1 <= d <= n <= nc.
    let e_tab: Vec<Vec<BigFloat>> = (0..=nc)
        .map(|n| {
            (0..=n)
                .map(|d| {
                    let mut s = ctx.zero();
                    if d >= 1 {
                        for l in d..=n {
                            s = ctx.add(&s, &ctx.mul(&beta[n][l], &plam[l - d]));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    let pa = ctx.f(a);
    let mut a_pow = vec![ctx.one()];
    for d in 1..=nc {
        a_pow.push(ctx.mul(&a_pow[d - 1], &pa));
    }
    let ln_a = a.ln();
    // c_tab[m][n] for 1 <= n <= min(m, nc), with running max term magnitude.
    let mut c_tab: Vec<Vec<BigFloat>> = Vec::with_capacity(m_max + 1);
    let mut c_big: Vec<Vec<f64>> = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let top = m.min(nc);
        let mut row = vec![ctx.zero(); top + 1];
        let mut big = vec![f64::NEG_INFINITY; top + 1];
        for d in 1..=top {
            // Suffix sums over k from m down to d give H(m, d, n) for n >= d.
            let mut h = ctx.zero();
            let lead = ctx.mul(&pmu[m + d], &a_pow[d]);
            let ln_lead = ln_pmu[m + d] + d as f64 * ln_a;
            for k in (d..=m).rev() {
                let tk = ctx.mul(&binom[k + d - 1][d - 1], &phi[m + d + 1][k + d]);
                h = ctx.add(&h, &tk);
                if k <= top {
                    let n = k;
                    let term = ctx.mul(&ctx.mul(&lead, &h), &e_tab[n][d]);
                    row[n] = signed_add(ctx, &row[n], &term, d % 2 == 0);
                    big[n] = big[n].max(ln_lead + ln_abs(&h) + ln_abs(&e_tab[n][d]));
                }
            }
        }
        c_tab.push(row);
        c_big.push(big);
    }

    let w = n_max + 1;
    let mut out = vec![0.0; (m_max + 1) * w];
    let mut worst = f64::NEG_INFINITY;
    for m in 0..=m_max {
        for n in 0..=n_max {
            let a_part = ctx.mul(&pmu[m], &d_abar[n]);
            let mut ln_mag = ln_pmu[m];
            let v = if n > m {
                let b1 = b_val(ctx, m, n);
                let b0 = b_val(ctx, m, n - 1);
                ln_mag = ln_add(ln_mag, ln_abs(&b1));
                ctx.add(&a_part, &ctx.sub(&b1, &b0))
            } else if n == m {
                let b1 = b_val(ctx, m, n);
                ln_mag = ln_add(ln_mag, ln_abs(&b1));
                let c = if n >= 1 {
                    ln_mag = ln_add(ln_mag, c_big[m][n]);
                    c_tab[m][n].clone()
                } else {
                    ctx.zero()
                };
                ctx.add(&ctx.add(&a_part, &b1), &c)
            } else {
                let c0 = if n >= 1 { c_tab[m][n].clone() } else { ctx.zero() };
                if n >= 1 {
                    ln_mag = ln_add(ln_mag, c_big[m][n]);
                }
                ln_mag = ln_add(ln_mag, c_big[m][n + 1]);
                ctx.add(&a_part, &ctx.sub(&c0, &c_tab[m][n + 1]))
            };
            out[m * w + n] = to_f64(&v);
            worst = worst.max(ln_mag + ln_slack(ctx, slack_base * (m + n + 2)));
        }
    }
    (out, worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::poisson_pmf;
    use approx::assert_abs_diff_eq;

    fn params(l1: f64, l2: f64, a: f64) -> DependenceParams {
        DependenceParams::new(l1, l2, a).unwrap()
    }

    // Reference cells from a direct quadrature of the Erlang/binomial
    // representation of P{S_m <= t, T_n <= t}, differenced in (m, n).
    #[test]
    fn matches_quadrature_cells_at_unit_gamma() {
        let pmf = joint_pmf(&params(2.0, 1.0, 0.5), 1.0, DEFAULT_TAIL_TOL).unwrap();
        assert_abs_diff_eq!(pmf.get(0, 0), 0.1353352832, epsilon = 1e-9);
        assert_abs_diff_eq!(pmf.get(1, 0), 0.0855482149, epsilon = 1e-9);
        assert_abs_diff_eq!(pmf.get(1, 1), 0.1851223516, epsilon = 1e-9);
        assert_abs_diff_eq!(pmf.get(2, 1), 0.0918648340, epsilon = 1e-9);
        assert_abs_diff_eq!(pmf.get(3, 3), 0.0391680842, epsilon = 1e-9);
    }

    #[test]
    fn matches_quadrature_cells_below_unit_gamma() {
        let pmf = joint_pmf(&params(2.0, 2.0, 0.5), 1.0, DEFAULT_TAIL_TOL).unwrap();
        assert_abs_diff_eq!(pmf.get(0, 0), 0.0497870684, epsilon = 1e-9);
        assert_abs_diff_eq!(pmf.get(1, 1), 0.1178897756, epsilon = 1e-9);
        assert_abs_diff_eq!(pmf.get(2, 3), 0.0539359907, epsilon = 1e-9);
    }

    #[test]
    fn matches_quadrature_cells_above_unit_gamma() {
        let pmf = joint_pmf(&params(4.0, 1.0, 0.5), 0.7, DEFAULT_TAIL_TOL).unwrap();
        assert_abs_diff_eq!(pmf.get(0, 0), 0.0608100626, epsilon = 1e-9);
        assert_abs_diff_eq!(pmf.get(1, 0), 0.1157467669, epsilon = 1e-9);
        assert_abs_diff_eq!(pmf.get(1, 1), 0.0545214085, epsilon = 1e-9);
        assert_abs_diff_eq!(pmf.get(3, 3), 0.0052842312, epsilon = 1e-9);
    }

    #[test]
    fn boundary_branches_agree() {
        let d = joint_pmf_boundary_check(&params(2.0, 1.0, 0.5), 1.0).unwrap();
        assert!(d < 1e-12, "gap {d}");
        let d = joint_pmf_boundary_check(&params(4.0, 2.0, 0.5), 0.5).unwrap();
        assert!(d < 1e-12, "gap {d}");
        assert!(joint_pmf_boundary_check(&params(4.0, 3.0, 0.5), 0.5).is_err());
    }

    #[test]
    fn zero_weight_is_product_law() {
        let pmf = joint_pmf(&params(3.0, 2.0, 0.0), 1.0, DEFAULT_TAIL_TOL).unwrap();
        assert_abs_diff_eq!(
            pmf.get(2, 4),
            poisson_pmf(2, 3.0).unwrap() * poisson_pmf(4, 2.0).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn unit_weight_is_nested() {
        let pmf = joint_pmf(&params(3.0, 2.0, 1.0), 1.0, DEFAULT_TAIL_TOL).unwrap();
        for (m, n, p) in pmf.iter() {
            if n > m {
                assert_eq!(p, 0.0);
            }
        }
        assert_abs_diff_eq!(pmf.correlation(), (2.0f64 / 3.0).sqrt(), epsilon = 1e-8);
    }

    #[test]
    fn tiny_horizon_concentrates_at_origin() {
        let pmf = joint_pmf(&params(20.0, 20.0, 0.5), 1e-9, DEFAULT_TAIL_TOL).unwrap();
        assert_abs_diff_eq!(pmf.get(0, 0), 1.0, epsilon = 1e-7);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = params(2.0, 1.0, 0.5);
        assert!(joint_pmf(&p, 0.0, 1e-10).is_err());
        assert!(joint_pmf(&p, 1.0, 0.1).is_err());
    }

    #[test]
    fn common_pmf_marginals() {
        let pmf = common_pmf(5.0, 10.0, 7.0, 1.0, 1e-12).unwrap();
        for (m, r) in pmf.row_sums().iter().enumerate() {
            assert_abs_diff_eq!(*r, poisson_pmf(m as u64, 10.0).unwrap(), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(pmf.correlation(), 5.0 / 70f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn csv_layout() {
        let pmf = independent_pmf(0.1, 0.1, 1.0, 1e-4).unwrap();
        let mut buf = Vec::new();
        pmf.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("m,n,prob"));
        assert!(lines.next().unwrap().starts_with("0,0,"));
        assert!(lines.next().unwrap().starts_with("0,1,"));
    }
}
