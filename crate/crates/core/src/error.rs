use thiserror::Error;

/// Errors raised by state validation and the correlation measures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has {found} entries, expected {rows}x{cols}")]
    Shape {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("matrix contains a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid local dimensions: {0}")]
    InvalidDims(String),

    #[error("not Hermitian: max |M - M^dagger| = {0:e} exceeds 1e-10")]
    NotHermitian(f64),

    #[error("trace is not 1: |Tr M - 1| = {0:e} exceeds 1e-10")]
    InvalidTrace(f64),

    #[error("not positive semidefinite: minimum eigenvalue {0:e} is below -1e-8")]
    NotPsd(f64),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("expected {expected} measurement angles, found {found}")]
    ParameterCount { expected: usize, found: usize },

    #[error("measurement basis is not orthonormal: residual {0:e}")]
    NotOrthonormal(f64),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("operation requires {expected} parties, state has {found}")]
    PartyCount { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical integrity violated: {0}")]
    NumericalIntegrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
