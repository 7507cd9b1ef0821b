use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix has a zero dimension ({rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigensolver did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    #[error("{z} lies in the spectrum (distance {distance:e} to the nearest eigenvalue)")]
    SpectralPoint { z: Complex64, distance: f64 },

    #[error("eigenvalue {eigenvalue} lies outside the domain of {function}")]
    DomainViolation { eigenvalue: Complex64, function: String },

    #[error("action lists have unequal length (right: {right}, left: {left})")]
    IndexMismatch { right: usize, left: usize },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid operad: {0}")]
    InvalidOperad(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("color {0} has no distinguished endomorphism")]
    MissingDistinguished(String),

    #[error("algebra failed validation with {0} violation(s)")]
    ValidationFailure(usize),

    #[error("bar level {0} is not supported (only levels 0 and 1)")]
    UnsupportedLevel(usize),

    #[error("functor `{0}` is not registered")]
    UnregisteredFunctor(String),

    #[error("functor `{functor}` requires real data: {detail}")]
    NonRealData { functor: String, detail: String },

    #[error(
        "decomposition total {decomposition} disagrees with coequalizer total {coequalizer}"
    )]
    InconsistentDecomposition {
        decomposition: usize,
        coequalizer: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
