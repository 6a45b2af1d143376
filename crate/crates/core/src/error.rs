use thiserror::Error;

/// Errors raised across the library.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type so the
/// error type stays non-generic.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum LabError {
    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds tolerance {tolerance:e}")]
    NonHermitianInput { asymmetry: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("spectrum leaves the domain {domain}: offending values {offending:?}")]
    DomainViolation { domain: String, offending: Vec<f64> },

    #[error("compression is not bounded below by eta = {eta:e}: minimum eigenvalue {min_eigenvalue:e}")]
    NotBoundedBelow { min_eigenvalue: f64, eta: f64 },

    #[error("rank {rank} is invalid for dimension {dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("matrix is not an orthogonal projection: {0}")]
    NotAProjection(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("post-construction audit failed: {0}")]
    ContractViolated(String),

    #[error("column constraint infeasible: norm of s1*q is {norm:e} > 1")]
    InfeasibleColumn { norm: f64 },

    #[error("corner constraint infeasible: norm of p*t*q is {norm:e} > 1")]
    InfeasibleCorner { norm: f64 },

    #[error("sequence entry {index} is not compressed by the face projection")]
    NotCompressed { index: String },

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("malformed payload: {0}")]
    Format(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
