use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (asymmetry {residual:.3e} exceeds tolerance)")]
    NotHermitian { residual: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.6e})")]
    NotPsd { eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator has no A-adjoint: ran(T*A) is not contained in ran(A)")]
    NotInBA,

    #[error("operator is not A-bounded: it maps ker(A) outside ker(A^1/2)")]
    NotInBAHalf,

    #[error("operator is not A-positive")]
    NotAPositive,

    #[error("operator is not supported on ran(A)")]
    NotSupportedOnRange,

    #[error("weight matrix has rank 0; the A-unit sphere is empty")]
    DegenerateSpace,

    #[error("vector is not A-normalized (norm {norm:.6e})")]
    NotUnitA { norm: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
