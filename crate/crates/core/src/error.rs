use num_complex::Complex64;
use std::path::PathBuf;

use crate::linalg::ComplexMatrix;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
        /// Eigenvalues (or singular values) already deflated when the cap was hit.
        partial: Vec<Complex64>,
    },

    #[error("matrix is numerically singular (pivot {pivot:e} at column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error("transform routes disagree by {gap:e} (allowed {allowed:e})")]
    RouteDisagreement {
        gap: f64,
        allowed: f64,
        route_a: Box<ComplexMatrix>,
        route_b: Box<ComplexMatrix>,
    },

    #[error("spectrum is not real: {offending:?}")]
    NotReal { offending: Vec<Complex64> },

    #[error(
        "zero classification failed: expected {expected_zeros} structural zeros below {threshold:e}, \
         largest candidate has magnitude {worst:e}"
    )]
    Classification {
        expected_zeros: usize,
        threshold: f64,
        worst: f64,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
