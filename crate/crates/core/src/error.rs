use thiserror::Error;

use crate::gaussq::GaussianRational;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("jordan cell with eigenvalue 0 is singular")]
    SingularCell,

    #[error("incomplete spectrum: eigenvalues account for {covered} of {dimension} dimensions")]
    IncompleteSpectrum { dimension: usize, covered: usize },

    #[error("eigenvalue {0} is excluded from the quotient (must not be -1, 0 or 1)")]
    ExcludedValue(Box<GaussianRational>),

    #[error("matrix is not idempotent")]
    NotIdempotent,

    #[error("invalid class: {0}")]
    InvalidClass(String),
}

impl Error {
    /// Dimensions not accounted for by the supplied spectrum, if this is
    /// an [`Error::IncompleteSpectrum`].
    pub fn spectrum_deficit(&self) -> Option<usize> {
        match self {
            Error::IncompleteSpectrum { dimension, covered } => {
                Some(dimension.saturating_sub(*covered))
            }
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
