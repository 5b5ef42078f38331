use thiserror::Error;

/// Errors produced by mesh construction, assembly, solvers and drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("mesh corruption: cell {cell} has non-positive area {area:e}")]
    DegenerateCell { cell: usize, area: f64 },

    #[error("mesh corruption: {0}")]
    MeshCorruption(String),

    #[error("ill-posed coefficient on cell {cell}: {reason}")]
    IllPosedCoefficient { cell: usize, reason: String },

    #[error("point ({x}, {y}) lies outside the mesh")]
    PointOutsideMesh { x: f64, y: f64 },

    #[error("conjugate gradient failed after {iterations} iterations (relative residual {residual:e})")]
    SolverFailure { iterations: usize, residual: f64 },

    #[error("value {value} lies outside the domain of the {penalty} penalty")]
    DomainViolation { value: f64, penalty: &'static str },

    #[error("field has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("eigenvalues must be sorted in ascending order")]
    Unsorted,

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("internal consistency violation: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
