//! Dense complex linear algebra: matrix type, pivoted QR, Jacobi SVD,
//! pseudo-inverse, numerical rank and LU.

mod lu;
mod matrix;
mod qr;
mod svd;

pub use lu::{determinant, inverse, Lu};
pub use matrix::{adjoint, is_hermitian, ComplexMatrix, C64};
pub use qr::{pseudo_inverse_qr, qr_economy, qr_economy_pivoted, QrFactors};
pub use svd::{default_rank_tol, numerical_rank, pseudo_inverse, singular_values, svd, SvdFactors};

pub(crate) use matrix::{phase, vec_norm, ONE, ZERO};
