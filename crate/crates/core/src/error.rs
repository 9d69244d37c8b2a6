use thiserror::Error;

/// Errors produced by the numerical routines and the report writers.
#[derive(Debug, Error)]
pub enum FracError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The exponent triple falls in a regime the operation does not cover.
    #[error("regime error: {0}")]
    Regime(String),

    /// The closed-form image is not available for this function family.
    #[error("unsupported closed form: {0}")]
    UnsupportedClosedForm(String),

    /// The defining integral diverges.
    #[error("divergent integral: {0}")]
    DivergentIntegral(String),

    /// A root could not be bracketed on the scan grid.
    #[error("root not located: {message} (min |residual| = {min_residual:e})")]
    NotLocated { message: String, min_residual: f64 },

    #[error("invalid input file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, FracError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(FracError::Domain(msg.into()))
}
