use thiserror::Error;

pub type Result<T> = std::result::Result<T, AmgError>;

#[derive(Debug, Error)]
pub enum AmgError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid sparse matrix: {0}")]
    InvalidMatrix(String),

    #[error("zero diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },

    #[error("coincident coordinates for connected nodes {row} and {col}")]
    ZeroDistance { row: usize, col: usize },

    #[error("material tensor is not symmetric positive definite: {0}")]
    NotSpd(String),

    #[error("degenerate element {element}: non-positive Jacobian determinant")]
    DegenerateElement { element: usize },

    #[error("node {node} does not belong to any element")]
    IsolatedNode { node: usize },

    #[error("drop tolerance {0} outside [0, 1]")]
    ThetaOutOfRange(f64),

    #[error("drop mask does not match the matrix pattern")]
    PatternMismatch,

    #[error("singular matrix: pivot {pivot} in column {column}")]
    SingularMatrix { column: usize, pivot: f64 },

    #[error("CG breakdown at iteration {iteration}: curvature {curvature} is not positive")]
    Breakdown { iteration: usize, curvature: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("matrix market parse error on line {line}: {msg}")]
    MatrixMarket { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
