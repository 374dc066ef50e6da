pub mod calibrate;
pub mod pmf;
pub mod price;
pub mod reproduce;
pub mod simulate;

use std::path::PathBuf;

use crate::config::{Loaded, NumericsCfg};
use crate::error::CliError;
use crate::output::OutDir;
use crate::Common;

/// Loads `--config`, which every command but `reproduce` requires.
pub fn load(common: &Common) -> Result<Loaded, CliError> {
    let path = common.config.as_ref().ok_or_else(|| CliError::Validation("--config is required".into()))?;
    Loaded::from_path(path)
}

/// `[numerics]` with command-line overrides applied.
pub fn numerics(cfg: &NumericsCfg, common: &Common) -> Result<NumericsCfg, CliError> {
    let n = NumericsCfg {
        tail_tol: common.tail_tol.unwrap_or(cfg.tail_tol),
        n_paths: common.paths.unwrap_or(cfg.n_paths),
        seed: common.seed.unwrap_or(cfg.seed),
    };
    if !(n.tail_tol > 0.0 && n.tail_tol < 1.0) {
        return Err(CliError::Validation(format!("numerics.tail_tol must lie in (0, 1), got {}", n.tail_tol)));
    }
    Ok(n)
}

pub fn out_dir(loaded: Option<&Loaded>, common: &Common, hash: &str) -> Result<OutDir, CliError> {
    let dir = match (&common.out, loaded.and_then(|l| l.cfg.io.output.as_ref().map(|p| l.resolve(p)))) {
        (Some(d), _) => d.clone(),
        (None, Some(d)) => d,
        (None, None) => PathBuf::from("out"),
    };
    OutDir::create(&dir, hash)
}

pub fn report_written(out: &OutDir) {
    for p in out.written() {
        println!("wrote {}", p.display());
    }
}
