use thiserror::Error;

/// Errors produced by the rotor/Bell numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid rotor basis: jmax = {jmax}, m = {m} (need jmax >= 1 and |m| <= jmax)")]
    InvalidBasis { jmax: u32, m: i32 },

    #[error("matrix is not Hermitian: max |A - A^H| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NonConvergence { sweeps: usize, off_norm: f64 },

    #[error("eigensolver failed at t = {t}: {source}")]
    ScanPoint {
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True if this error (or the error it wraps) is an eigensolver failure.
    pub fn is_non_convergence(&self) -> bool {
        match self {
            Error::NonConvergence { .. } => true,
            Error::ScanPoint { source, .. } => source.is_non_convergence(),
            _ => false,
        }
    }
}
