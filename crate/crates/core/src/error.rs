use crate::snapshots::ColumnWindow;
use thiserror::Error;

/// Errors raised by the decomposition routines, the solvers and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("partition too fine: {n_parts} windows over {columns} columns leave fewer than {nu_star} columns per window")]
    PartitionTooFine {
        columns: usize,
        n_parts: usize,
        nu_star: usize,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("eigendecomposition failed for window {window:?}")]
    Spectral { window: ColumnWindow },

    #[error("nonfinite result: {0}")]
    Nonfinite(String),

    #[error("eigenvalue {re:+e}{im:+e}i overflows at power {k}")]
    PowerOverflow { re: f64, im: f64, k: usize },

    #[error("solution blew up at step {step} (t = {time})")]
    BlowUp { step: usize, time: f64 },

    #[error("division by zero: {0}")]
    ZeroNorm(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
