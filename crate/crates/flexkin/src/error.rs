use thiserror::Error;

/// Errors raised by grid construction, solvers, oracles and output.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid wave speed {0}: must be positive")]
    InvalidWaveSpeed(f64),

    #[error("state error: {0}")]
    State(String),

    #[error("solution diverged at cell {cell} (t = {t})")]
    Divergence { cell: usize, t: f64 },

    #[error("negative depth {h} at cell {cell} (t = {t})")]
    Positivity { cell: usize, t: f64, h: f64 },

    #[error("no steady state after {steps} steps (residual {residual:e})")]
    NonConvergence { steps: usize, residual: f64 },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("harness error: {0}")]
    Harness(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical method itself rather than of the setup.
    pub fn is_divergence(&self) -> bool {
        matches!(
            self,
            Error::Divergence { .. } | Error::Positivity { .. } | Error::NonConvergence { .. }
        )
    }

    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Csv(_) | Error::Json(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
