use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("surface {0} admits no ideal triangulation")]
    NoTriangulation(String),
    #[error("surface {0} is not supported by this operation")]
    UnsupportedSurface(String),
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("invalid triangulation: {0}")]
    Invalid(String),
    #[error("arc {0} is a self-folded edge and cannot be flipped")]
    SelfFoldedFlip(String),
    #[error("puncture {0} has valency {1}, a pop needs valency one")]
    InvalidPop(String, usize),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("parse error: {0}")]
    Parse(String),
}
