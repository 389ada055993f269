use thiserror::Error;

use crate::kato::IterationDiagnostics;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("zero mode error: {0}")]
    ZeroMode(String),

    #[error("grid mismatch: {0}")]
    Grid(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("fixed-point iteration diverged: {reason}")]
    Divergence {
        reason: String,
        diagnostics: Box<IterationDiagnostics>,
    },

    #[error("fixed-point iteration did not converge in {iterations} iterations")]
    NoConvergence {
        iterations: usize,
        diagnostics: Box<IterationDiagnostics>,
    },

    #[error("reference integrator failed: {0}")]
    Oracle(String),

    #[error("power-law fit unreliable (r^2 = {r2:.4})")]
    FitUnreliable {
        r2: f64,
        gamma: f64,
        times: Vec<f64>,
        ratios: Vec<f64>,
    },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}
