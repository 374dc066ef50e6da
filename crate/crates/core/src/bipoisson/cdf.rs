use super::DependenceParams;

/// Joint CDF `H(x1, x2) = P{X1 <= x1, X2 <= x2}` of the first arrival times
/// `X1 ~ Exp(λ1)` of `N1` and `X2 ~ Exp(λ2)` of `N2`.
///
/// With `c = x1 ∧ (x2/γ)`,
/// `H = 1{c >= 0} [(1 − e^{−λ1 c}) − e^{−λ2 x2}(1 − e^{−(λ1 − γλ2) c})]`.
pub fn joint_cdf_exponential(x1: f64, x2: f64, params: &DependenceParams) -> f64 {
    if x1 <= 0.0 || x2 <= 0.0 {
        return 0.0;
    }
    let DependenceParams { lambda1: l1, lambda2: l2, .. } = *params;
    let g = params.gamma();
    let c = if g > 0.0 { x1.min(x2 / g) } else { x1 };
    let h = -(-l1 * c).exp_m1() + (-l2 * x2).exp() * (-(l1 - g * l2) * c).exp_m1();
    h.clamp(0.0, 1.0)
}
