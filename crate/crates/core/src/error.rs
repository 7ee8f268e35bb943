use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the library.
///
/// Variants are split into caller mistakes ([`Error::InvalidInput`],
/// [`Error::DimensionMismatch`], [`Error::Parse`], [`Error::Io`]) and
/// mathematically ill-posed inputs; see [`Error::is_ill_posed`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Schur iteration did not converge within {budget} QR sweeps")]
    NoConvergence { budget: usize },

    #[error("{lambda} is not an eigenvalue: smallest singular value of A - lambda*I is {sigma_min:e} > {tol:e}")]
    NotAnEigenvalue {
        lambda: Complex64,
        sigma_min: f64,
        tol: f64,
    },

    #[error("clustered spectrum: eigenvalues {first} and {second} are within {tol:e}")]
    ClusteredSpectrum {
        first: Complex64,
        second: Complex64,
        tol: f64,
    },

    #[error("duplicate points: z[{first}] == z[{second}] = {value}")]
    DuplicatePoints {
        first: usize,
        second: usize,
        value: Complex64,
    },

    #[error("vector is not an eigenvector: Schur block residual {residual:e} > {tol:e}")]
    BlockFormViolation { residual: f64, tol: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for inputs that are well-formed but mathematically ill-posed
    /// (repeated eigenvalues, coincident points, non-eigenvalues).
    pub fn is_ill_posed(&self) -> bool {
        matches!(
            self,
            Error::NotAnEigenvalue { .. }
                | Error::ClusteredSpectrum { .. }
                | Error::DuplicatePoints { .. }
                | Error::BlockFormViolation { .. }
                | Error::NoConvergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
