use thiserror::Error;

/// Errors raised anywhere in the weak-measurement toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:e})")]
    Convergence { sweeps: usize, off_diagonal: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian: entry ({row}, {col}) differs from its conjugate transpose by {defect:e}")]
    NotHermitian { row: usize, col: usize, defect: f64 },

    #[error("state vector has zero norm")]
    ZeroNorm,

    #[error("orthogonal selection: |<post|pre>| = {overlap:e} is below the floor {floor:e}")]
    OrthogonalSelection { overlap: f64, floor: f64 },

    #[error("wavefunction vanishes at Q = 0, beta = 0")]
    ZeroWavefunction,

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("density integrates to {integral:e} on the grid")]
    DegenerateDensity { integral: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
