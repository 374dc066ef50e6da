//! Run configuration: one TOML document, every section schema-checked and
//! unknown keys rejected.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use cointjump::calibration::{JointKind, Theta};
use cointjump::models::ForwardCurve;
use cointjump::{Dependence, Direction, JumpPair, OptionKind, DEFAULT_TAIL_TOL};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dependence: Option<DependenceCfg>,
    pub model: Option<ModelCfg>,
    pub option: Option<OptionCfg>,
    #[serde(default)]
    pub numerics: NumericsCfg,
    #[serde(default)]
    pub io: IoCfg,
    pub pmf: Option<PmfCfg>,
    pub simulate: Option<SimulateCfg>,
    pub calibrate: Option<CalibrateCfg>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DependenceCfg {
    Independent { lambda1: f64, lambda2: f64 },
    Common { lambda1: f64, lambda2: f64, lambda: f64 },
    Cointegrated { lambda1: f64, lambda2: f64, a: f64 },
}

impl DependenceCfg {
    pub fn pair(&self) -> Result<JumpPair, CliError> {
        let (l1, l2, dep) = match *self {
            DependenceCfg::Independent { lambda1, lambda2 } => (lambda1, lambda2, Dependence::Independent),
            DependenceCfg::Common { lambda1, lambda2, lambda } => (lambda1, lambda2, Dependence::Common { lambda }),
            DependenceCfg::Cointegrated { lambda1, lambda2, a } => (lambda1, lambda2, Dependence::Cointegrated { a }),
        };
        Ok(JumpPair::new(l1, l2, dep)?)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MertonLegCfg {
    pub s0: f64,
    pub sigma: f64,
    pub jump_m: f64,
    pub jump_nu: f64,
}

/// Either `forward` (flat) or `curve` (a `date,price` file) must be set.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GouLegCfg {
    pub forward: Option<f64>,
    pub curve: Option<PathBuf>,
    pub k: f64,
    pub sigma: f64,
    pub jump_m: f64,
    pub jump_nu: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelCfg {
    Merton {
        #[serde(default)]
        r: f64,
        rho_w: f64,
        rho_d: f64,
        leg1: MertonLegCfg,
        leg2: MertonLegCfg,
    },
    Gou {
        #[serde(default)]
        r: f64,
        rho_w: f64,
        rho_d: f64,
        /// Date from which curve files are measured.
        valuation: Option<NaiveDate>,
        leg1: GouLegCfg,
        leg2: GouLegCfg,
    },
    Ss {
        #[serde(default)]
        r: f64,
        valuation: Option<NaiveDate>,
        forward: Option<f64>,
        curve: Option<PathBuf>,
        k: f64,
        sigma1: f64,
        sigma2: f64,
        rho: f64,
        #[serde(default)]
        mu: f64,
        jump_m: f64,
        jump_nu: f64,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OptionCfg {
    Spread {
        maturity: f64,
        #[serde(default)]
        direction: Direction,
    },
    Vanilla {
        payoff: OptionKind,
        strike: f64,
        maturity: f64,
        /// Which leg of a two-leg market (1 or 2); ignored for `ss`.
        #[serde(default = "first_leg")]
        leg: u8,
    },
    Interconnector {
        valuation: NaiveDate,
        first_day: NaiveDate,
        last_day: NaiveDate,
        #[serde(default)]
        direction: Direction,
    },
}

fn first_leg() -> u8 {
    1
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsCfg {
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    #[serde(default)]
    pub n_paths: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl Default for NumericsCfg {
    fn default() -> Self {
        Self { tail_tol: DEFAULT_TAIL_TOL, n_paths: 0, seed: default_seed() }
    }
}

fn default_tail_tol() -> f64 {
    DEFAULT_TAIL_TOL
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IoCfg {
    pub series1: Option<PathBuf>,
    pub series2: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmfCfg {
    pub t: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateCfg {
    pub start: NaiveDate,
    pub steps: usize,
    pub theta1: Theta,
    pub theta2: Theta,
    pub rho_w: f64,
    #[serde(default)]
    pub rho_d: f64,
    /// Log-price levels of the two series.
    #[serde(default)]
    pub level1: f64,
    #[serde(default)]
    pub level2: f64,
    /// Tuesday..Sunday log effects relative to Monday, shared by both series.
    #[serde(default)]
    pub weekday: [f64; 6],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrateCfg {
    pub kinds: Vec<JointKind>,
}

/// A parsed configuration with the directory its relative paths refer to.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub cfg: RunConfig,
    pub base: PathBuf,
    pub hash: String,
}

impl Loaded {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_str(&text, base)
    }

    pub fn from_str(text: &str, base: PathBuf) -> Result<Self, CliError> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Validation(format!("invalid config: {e}")))?;
        Ok(Self { cfg, base, hash: sha256_hex(text.as_bytes()) })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn dependence(&self) -> Result<JumpPair, CliError> {
        self.cfg.dependence.as_ref().ok_or_else(|| missing("dependence"))?.pair()
    }

    pub fn curve(&self, forward: Option<f64>, curve: Option<&Path>, valuation: Option<NaiveDate>, key: &str) -> Result<ForwardCurve, CliError> {
        match (forward, curve) {
            (Some(f), None) => Ok(ForwardCurve::flat(f)?),
            (None, Some(p)) => {
                let valuation =
                    valuation.ok_or_else(|| CliError::Validation(format!("{key}.curve needs model.valuation")))?;
                let path = self.resolve(p);
                let file = fs::File::open(&path)
                    .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
                let series = cointjump::PriceSeries::from_csv(file)?;
                let quotes: Vec<_> = series.dates.iter().copied().zip(series.prices.iter().copied()).collect();
                Ok(ForwardCurve::from_daily(valuation, &quotes)?)
            }
            _ => Err(CliError::Validation(format!("{key}: set exactly one of `forward` and `curve`"))),
        }
    }
}

pub fn missing(section: &str) -> CliError {
    CliError::Validation(format!("config is missing the [{section}] section"))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_named() {
        let err = Loaded::from_str("[numerics]\ntail_tol = 1e-9\nbogus = 1\n", PathBuf::new()).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err = Loaded::from_str("[dependence]\nkind = \"independent\"\nlambda1 = 1.0\nlambda2 = 1.0\na = 0.5\n", PathBuf::new())
            .unwrap_err();
        assert!(err.to_string().contains('a'), "{err}");
    }

    #[test]
    fn hash_tracks_the_exact_text() {
        let a = Loaded::from_str("[pmf]\nt = 1.0\n", PathBuf::new()).unwrap();
        let b = Loaded::from_str("[pmf]\nt = 1.0 \n", PathBuf::new()).unwrap();
        assert_eq!(a.hash.len(), 64);
        assert_ne!(a.hash, b.hash);
    }
}
