use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("simplex is degenerate")]
    DegenerateSimplex,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point is not in the expected shell: {0}")]
    NotInShell(String),
    #[error("cells must contain the origin")]
    NotOriginIncident,
    #[error("vector is not a diagonal of the cross polytope")]
    NotADiagonal,
    #[error("triangulation admits no interior point")]
    InfeasibleTriangulation,
    #[error("optimizer did not converge after {iterations} iterations: {message}; last iterate {iterate:?}")]
    NonConvergence {
        iterations: usize,
        message: String,
        iterate: Vec<f64>,
    },
    #[error("rationalization failed: regulator {index} evaluates to {value}")]
    RationalizationFailed { index: usize, value: String },
    #[error("certificate rejected: {0}")]
    Rejected(#[from] Rejection),
    #[error("data integrity failure: {0}")]
    DataIntegrity(String),
    #[error("unknown triangulation {0}")]
    UnknownTriangulation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error, serde::Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    #[error("no interior point exists for the triangulation")]
    NoInteriorPoint,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form has dimension {0}, expected 8")]
    WrongDimension(usize),
    #[error("regulator {index} ({kind}) evaluates to {value} < 0")]
    RegulatorViolated {
        index: usize,
        kind: String,
        value: String,
    },
}
