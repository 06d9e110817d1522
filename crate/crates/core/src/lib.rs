//! Pseudo-similarity transforms `H†·P·H` of Hermitian matrices and numerical
//! verification of eigenvalue interlacing for them.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, pivoted QR, Jacobi SVD,
//!   pseudo-inverse, LU.
//! * [`eigen`]: Hermitian (tridiagonal QL) and general (Hessenberg QR)
//!   eigenvalue solvers.
//! * [`pseudosim`]: the transforms themselves (pseudo-similarity, unitary
//!   compression, rank-deficient inflation, oblique similarity).
//! * [`interlacing`]: interlacing checks and structural-zero extraction.
//! * [`genmat`]: seeded random ensembles.
//! * [`experiment`]: the batch runner behind the `pseudosim` CLI.
//! * [`oracle`]: characteristic-polynomial reference computations used to
//!   cross-check the solvers.

// `!(x >= lo)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigen;
pub mod error;
pub mod experiment;
pub mod genmat;
pub mod interlacing;
pub mod linalg;
pub mod oracle;
pub mod pseudosim;
mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
