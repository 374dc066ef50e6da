use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A joint probability came out below the cancellation floor.
    #[error("numerical instability at cell ({m}, {n}): value {value:e}")]
    Instability { m: usize, n: usize, value: f64 },

    #[error("time step too large: {0}")]
    StepTooLarge(String),

    #[error("series truncation: {0}")]
    Truncation(String),

    #[error("forward curve: {0}")]
    Curve(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("data: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
