use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid exponent {0}: fractional orders must be non-negative")]
    InvalidExponent(f64),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("padded transform needs {requested} points, above the cap of {cap}")]
    Resource { requested: usize, cap: usize },

    #[error("{0} is undefined for the zero field")]
    ZeroField(&'static str),

    #[error(
        "petviashvili iteration did not converge in {iterations} iterations \
         (last residual {last_residual:.3e})"
    )]
    Divergence {
        iterations: usize,
        last_residual: f64,
        residual_history: Vec<f64>,
    },

    #[error("petviashvili iteration degenerated: {0}")]
    DegenerateIteration(String),

    #[error("numerical instability after t = {t_last_good}: {reason}")]
    Instability { t_last_good: f64, reason: String },

    #[error(
        "picard iteration did not contract after {sweeps} sweeps \
         (last update {last_update:.3e})"
    )]
    NoContraction { sweeps: usize, last_update: f64 },

    #[error("theorem not applicable: {0}")]
    Inapplicable(String),

    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),

    #[error("malformed data file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
