use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported group type {0}")]
    UnsupportedType(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point lies on a chamber wall: {0}")]
    OnWall(String),
    #[error("point is not regular: {0}")]
    NotRegular(String),
    #[error("point is outside the closed alcove: {0}")]
    OutsideAlcove(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("polynomial is not symmetric: {0}")]
    NotSymmetric(String),
    #[error("degenerate arrangement: {0}")]
    DegenerateArrangement(String),
    #[error("unsupported decomposition: {0}")]
    UnsupportedDecomposition(String),
    #[error("series did not converge: {0}")]
    Convergence(String),
    #[error("degenerate density: {0}")]
    DegenerateDensity(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
