use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiffError {
    #[error("numerator has a repeated root or a root on a pole near {0}")]
    NonSimpleZero(String),
    #[error("polar type {0} is excluded")]
    DegeneratePolarType(String),
    #[error("differential has no pole")]
    NoPole,
    #[error("differential has no finite critical point")]
    NoFiniteCritical,
    #[error("zero at infinity is not supported")]
    ZeroAtInfinity,
    #[error("invalid differential: {0}")]
    Invalid(String),
    #[error("pole {0} has odd order")]
    OddOrderPole(String),
    #[error("{0} is not a pole")]
    NotAPole(String),
    #[error("{0} is not a simple zero")]
    NotAZero(String),
    #[error("differential has a saddle trajectory at phase {0}")]
    NotSaddleFree(f64),
    #[error("differential has a simple pole")]
    Incomplete,
    #[error("integration failed: {0}")]
    IntegrationFailure(String),
    #[error("inconclusive: {0}")]
    Inconclusive(Inconclusive),
    #[error("decomposition mismatch: {0}")]
    DecompositionMismatch(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("wall kind mismatch: {0}")]
    MismatchedWallKind(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Surface(#[from] surface_core::SurfaceError),
    #[error(transparent)]
    Quiver(#[from] quiver_core::QuiverError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Inconclusive {
    /// A ray ran out of steps.
    Budget,
    /// A ray passed a zero inside the hysteresis band.
    NearSaddle(f64),
}

impl std::fmt::Display for Inconclusive {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Inconclusive::Budget => write!(f, "step budget exhausted"),
            Inconclusive::NearSaddle(d) => write!(f, "ray passes a zero at distance {d:.3e}"),
        }
    }
}
