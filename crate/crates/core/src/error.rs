use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh request: {0}")]
    InvalidMesh(String),
    #[error("degenerate simplex: {0}")]
    DegenerateSimplex(String),
    #[error("unknown sub-simplex {0:?}")]
    UnknownSubSimplex(Vec<usize>),
    #[error("missing normal frame for codim {codim} sub-simplex {local}")]
    MissingFrame { codim: usize, local: usize },
    #[error("singular Vandermonde system (condition {condition:.3e}) for m={m}, n={n}")]
    SingularVandermonde { m: usize, n: usize, condition: f64 },
    #[error("nodal duality violated: max |d_j(p_i) - δ_ij| = {residual:.3e}")]
    NodalDuality { residual: f64 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("penalty parameter must be positive, got {0}")]
    InvalidPenalty(f64),
    #[error("non-finite value of {what} at {point:?}")]
    NonFinite { what: String, point: Vec<f64> },
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("solver did not converge: {iterations} iterations, relative residual {residual:.3e}")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
