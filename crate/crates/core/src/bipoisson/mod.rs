//! The dependent bivariate Poisson process built from self-decomposable
//! exponentials, together with the two classical alternatives (independent
//! and common-shock) used for comparison.
//!
//! Labelling: `N1` has intensity `lambda1` and is indexed by `m`; `N2` has
//! intensity `lambda2` and is indexed by `n`. With `γ = a λ1 / λ2 >= 1` the
//! construction forces `N2(t) <= N1(t)` pathwise.

mod cdf;
mod pmf;
mod sample;
mod step;

pub use cdf::joint_cdf_exponential;
pub use pmf::{
    joint_pmf, joint_pmf_boundary_check, poisson_correlation, truncation_level, JointPmf,
    DEFAULT_TAIL_TOL,
};
pub use sample::{sample_counts, sample_events, sample_pair, EventTimePair};
pub use step::{cdf_step_probs, step_probs, StepProbs};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Intensities and self-decomposability weight of the coupled pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DependenceParams {
    pub lambda1: f64,
    pub lambda2: f64,
    pub a: f64,
}

impl DependenceParams {
    /// Validates `λ1, λ2 > 0` and `a ∈ [0, 1]`. The endpoints are accepted as
    /// the independent (`a = 0`) and comonotone (`a = 1`) limits.
    pub fn new(lambda1: f64, lambda2: f64, a: f64) -> Result<Self> {
        if !(lambda1 > 0.0 && lambda1.is_finite()) || !(lambda2 > 0.0 && lambda2.is_finite()) {
            return domain(format!("intensities must be positive, got ({lambda1}, {lambda2})"));
        }
        if !(0.0..=1.0).contains(&a) {
            return domain(format!("weight a must lie in [0, 1], got {a}"));
        }
        Ok(Self { lambda1, lambda2, a })
    }

    /// `γ = a λ1 / λ2`.
    pub fn gamma(&self) -> f64 {
        self.a * self.lambda1 / self.lambda2
    }
}

/// How the jump counts of the two legs are coupled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Dependence {
    Independent,
    /// Shared Poisson component of intensity `lambda` added to independent
    /// idiosyncratic parts of intensities `λi − λ`.
    Common { lambda: f64 },
    /// Self-decomposable coupling with weight `a`.
    Cointegrated { a: f64 },
}

impl Dependence {
    pub fn name(&self) -> &'static str {
        match self {
            Dependence::Independent => "independent",
            Dependence::Common { .. } => "common",
            Dependence::Cointegrated { .. } => "cointegrated",
        }
    }
}

/// A pair of jump intensities with their dependence structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpPair {
    pub lambda1: f64,
    pub lambda2: f64,
    pub dependence: Dependence,
}

impl JumpPair {
    pub fn new(lambda1: f64, lambda2: f64, dependence: Dependence) -> Result<Self> {
        let pair = Self { lambda1, lambda2, dependence };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        let (l1, l2) = (self.lambda1, self.lambda2);
        if !(l1 >= 0.0 && l1.is_finite()) || !(l2 >= 0.0 && l2.is_finite()) {
            return domain(format!("intensities must be finite and >= 0, got ({l1}, {l2})"));
        }
        match self.dependence {
            Dependence::Independent => Ok(()),
            Dependence::Common { lambda } => {
                if !(lambda >= 0.0) || lambda > l1.min(l2) {
                    domain(format!(
                        "common intensity {lambda} must lie in [0, min({l1}, {l2})]"
                    ))
                } else {
                    Ok(())
                }
            }
            Dependence::Cointegrated { a } => {
                if !(0.0..=1.0).contains(&a) {
                    domain(format!("weight a must lie in [0, 1], got {a}"))
                } else if a > 0.0 && (l1 == 0.0 || l2 == 0.0) {
                    domain("cointegrated coupling needs both intensities positive")
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Cointegrated parameters, if this pair uses that coupling.
    pub fn cointegrated_params(&self) -> Option<DependenceParams> {
        match self.dependence {
            Dependence::Cointegrated { a } => Some(DependenceParams {
                lambda1: self.lambda1,
                lambda2: self.lambda2,
                a,
            }),
            _ => None,
        }
    }

    /// Joint law of `(N1(t), N2(t))` for any of the three couplings.
    pub fn joint_pmf(&self, t: f64, tail_tol: f64) -> Result<JointPmf> {
        self.validate()?;
        match self.dependence {
            Dependence::Independent => pmf::independent_pmf(self.lambda1, self.lambda2, t, tail_tol),
            Dependence::Common { lambda } => {
                pmf::common_pmf(lambda, self.lambda1, self.lambda2, t, tail_tol)
            }
            Dependence::Cointegrated { a } => {
                if a == 0.0 || self.lambda1 == 0.0 || self.lambda2 == 0.0 {
                    pmf::independent_pmf(self.lambda1, self.lambda2, t, tail_tol)
                } else {
                    joint_pmf(&DependenceParams::new(self.lambda1, self.lambda2, a)?, t, tail_tol)
                }
            }
        }
    }

    /// `Corr[N1(t), N2(t)]`.
    pub fn correlation(&self, t: f64) -> Result<f64> {
        match self.dependence {
            Dependence::Independent => Ok(0.0),
            Dependence::Common { lambda } => {
                common_jump_correlation(lambda, self.lambda1, self.lambda2)
            }
            Dependence::Cointegrated { .. } => {
                Ok(self.joint_pmf(t, DEFAULT_TAIL_TOL)?.correlation())
            }
        }
    }
}

/// Correlation `λ / √(λ1 λ2)` of the common-shock construction.
pub fn common_jump_correlation(lambda: f64, lambda1: f64, lambda2: f64) -> Result<f64> {
    if !(lambda1 > 0.0) || !(lambda2 > 0.0) {
        return domain("marginal intensities must be positive");
    }
    if !(lambda >= 0.0) || lambda > lambda1.min(lambda2) {
        return domain(format!(
            "common intensity {lambda} exceeds min({lambda1}, {lambda2})"
        ));
    }
    Ok(lambda / (lambda1 * lambda2).sqrt())
}
