use thiserror::Error;

/// Errors raised anywhere in the certification pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix has rank {rank}, expected full row rank {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("matrix is {rows}x{cols}; need fewer rows than columns")]
    NotUnderdetermined { rows: usize, cols: usize },

    #[error("singular matrix (pivot column {0})")]
    Singular(usize),

    #[error("invalid linear program: {0}")]
    InvalidProblem(String),

    #[error("simplex breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("linear program is unbounded")]
    LpUnbounded,

    #[error("face {0} is empty (coordinate vanishes on the null space)")]
    FaceInfeasible(usize),

    #[error("every face is empty")]
    AllFacesInfeasible,

    #[error("columns are not unit norm (column {column} has norm {norm})")]
    NotADictionary { column: usize, norm: f64 },

    #[error("column {0} is zero")]
    ZeroColumn(usize),

    #[error("coherence must be positive, got {0}")]
    NonpositiveCoherence(f64),

    #[error("enumeration too large: {what} = {count} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        count: u128,
        limit: u128,
    },

    #[error("no witness available: {0}")]
    WitnessUnavailable(String),

    #[error("bad dimensions: {0}")]
    BadDimensions(String),

    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
