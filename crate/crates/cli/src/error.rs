use std::fmt;
use std::process::ExitCode;

/// Failure classes with their process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, input data or arguments (exit 2).
    Validation(String),
    /// A computation could not be carried out to the requested accuracy
    /// (exit 3).
    Numerical(String),
    /// A reproduced value missed its published target (exit 4).
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Mismatch(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
            CliError::Mismatch(m) => write!(f, "reproduction mismatch: {m}"),
        }
    }
}

impl From<cointjump::Error> for CliError {
    fn from(e: cointjump::Error) -> Self {
        use cointjump::Error as E;
        match e {
            E::Instability { .. } | E::Truncation(_) | E::StepTooLarge(_) | E::Fit(_) => CliError::Numerical(e.to_string()),
            E::Domain(_) | E::Curve(_) | E::Data(_) | E::Io(_) | E::Csv(_) => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Validation(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Validation(format!("json: {e}"))
    }
}
