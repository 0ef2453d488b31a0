use thiserror::Error;

/// Errors produced by the surface library.
#[derive(Debug, Error)]
pub enum Error {
    /// Elliptic modulus outside the supported range [0, 1).
    #[error("elliptic modulus p = {0} outside [0, 1)")]
    ModulusRange(f64),

    /// Integer pair fails one of the admissibility clauses.
    #[error("pair (n = {n}, m = {m}) is not admissible: {reason}")]
    NotAdmissible { n: u64, m: u64, reason: String },

    /// Caller passed a value outside the documented domain of an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Real 6x6 matrix does not represent a special unitary generator.
    #[error("generator rejected: {0}")]
    InvalidGenerator(String),

    /// Discretization too coarse for the requested computation.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    /// Iterative eigenvalue solver exceeded its iteration budget.
    #[error("eigenvalue iteration failed to converge")]
    EigenConvergence,

    /// Integer counts cannot be classified reliably near the spectral cutoff.
    #[error("classification ambiguous near cutoff: {0}")]
    AmbiguousAtCutoff(String),

    /// A verification fell outside its tolerance.
    #[error("tolerance exceeded: {0}")]
    ToleranceExceeded(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
