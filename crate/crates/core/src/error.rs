use thiserror::Error;

use crate::spectral::EigenResult;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameters out of range: {0}")]
    SpecOutOfRange(String),

    #[error("too large: {0}")]
    TooLarge(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("exponent p = {0} outside the supported range")]
    ExponentOutOfRange(f64),

    #[error("function vanishes identically")]
    ZeroFunction,

    #[error("function is nonzero on boundary vertex {0}")]
    BoundaryViolation(usize),

    #[error("no boundary")]
    NoBoundary,

    #[error("empty interior")]
    EmptyInterior,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("solver did not converge (best residual {:.3e})", .best.residual_inf)]
    NotConverged { best: Box<EigenResult> },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
