use thiserror::Error;

/// Errors produced by the grid, morphology and functional routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid spacings differ ({0} vs {1})")]
    SpacingMismatch(f64, f64),
    #[error("grid origins are not offset by an integer number of cells")]
    MisalignedOrigins,
    #[error("set has no occupied cell")]
    EmptySet,
    #[error("set is not r-convex for r = {0}")]
    NotRConvex(f64),
    #[error("no admissible center at distance >= h from the boundary")]
    CenterOnBoundary,
    #[error("polynomial degree {0} is above the supported maximum {1}")]
    DegreeTooLarge(usize, usize),
    #[error("polynomial is negative somewhere on [0, 1]")]
    NotNonnegative,
    #[error("set is not normalized to r_E = 1 (r_E = {0})")]
    NotNormalized(f64),
    #[error("bad shape parameters: {0}")]
    BadParameters(String),
    #[error("unknown corpus `{0}`")]
    UnknownCorpus(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
