//! One-sided (Hestenes) Jacobi SVD and the SVD-based pseudo-inverse.

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Thin SVD truncated to the numerical rank: `m ≈ u · diag(sigma) · vᴴ`.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// `rows x rank`, orthonormal columns.
    pub u: ComplexMatrix,
    /// Non-increasing, positive.
    pub sigma: Vec<f64>,
    /// `cols x rank`, orthonormal columns.
    pub v: ComplexMatrix,
    pub rank: usize,
}

impl SvdFactors {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let us = ComplexMatrix::from_fn(self.u.rows(), self.rank, |i, j| {
            self.u[(i, j)] * self.sigma[j]
        });
        &us * &self.v.adjoint()
    }
}

/// Default relative rank threshold: `max(rows, cols) · ε`.
pub fn default_rank_tol(m: &ComplexMatrix) -> f64 {
    m.rows().max(m.cols()).max(1) as f64 * f64::EPSILON
}

/// All singular values (untruncated, non-increasing) plus the rotated
/// columns and right factor, for a matrix with `rows >= cols`.
struct JacobiOutput {
    columns: ComplexMatrix,
    v: ComplexMatrix,
    sigma: Vec<f64>,
    order: Vec<usize>,
}

fn jacobi_tall(m: &ComplexMatrix) -> Result<JacobiOutput> {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(cols);
    let threshold = rows.max(1) as f64 * f64::EPSILON;
    // Columns at rounding-noise level cannot be orthogonalized further.
    let noise = (threshold * m.frobenius_norm()).powi(2);

    let mut converged = cols < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for i in 0..rows {
                    let x = a[(i, p)];
                    let y = a[(i, q)];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= threshold * (alpha * beta).sqrt() || alpha.min(beta) <= noise {
                    continue;
                }
                rotated = true;
                // Rotate (a_p, e^{-iφ} a_q) by a real Jacobi rotation, where
                // γ = |γ| e^{iφ}; this zeroes the (p, q) Gram entry.
                let ph = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let rot = ph.conj();
                for i in 0..rows {
                    let x = a[(i, p)];
                    let y = a[(i, q)] * rot;
                    a[(i, p)] = x * c - y * s;
                    a[(i, q)] = x * s + y * c;
                }
                for i in 0..cols {
                    let x = v[(i, p)];
                    let y = v[(i, q)] * rot;
                    v[(i, p)] = x * c - y * s;
                    v[(i, q)] = x * s + y * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            routine: "jacobi svd",
            iterations: MAX_SWEEPS,
            partial: Vec::new(),
        });
    }

    let sigma: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| sigma[y].total_cmp(&sigma[x]));
    Ok(JacobiOutput {
        columns: a,
        v,
        sigma,
        order,
    })
}

/// Thin SVD with rank `#{σ > rank_tol · σ_max}`; factors are truncated to
/// that rank. Zero matrices give rank 0 and empty factors.
pub fn svd(m: &ComplexMatrix, rank_tol: f64) -> Result<SvdFactors> {
    if !(rank_tol > 0.0) {
        return Err(Error::Contract(format!("rank_tol must be positive, got {rank_tol}")));
    }
    if m.rows() < m.cols() {
        let t = svd(&m.adjoint(), rank_tol)?;
        return Ok(SvdFactors {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
            rank: t.rank,
        });
    }

    let out = jacobi_tall(m)?;
    let sigma_max = out.order.first().map_or(0.0, |&j| out.sigma[j]);
    let rank = out
        .order
        .iter()
        .take_while(|&&j| sigma_max > 0.0 && out.sigma[j] > rank_tol * sigma_max)
        .count();

    let rows = m.rows();
    let kept = &out.order[..rank];
    let u = ComplexMatrix::from_fn(rows, rank, |i, j| {
        let col = kept[j];
        out.columns[(i, col)] / out.sigma[col]
    });
    let v = out.v.select_columns(kept);
    let sigma = kept.iter().map(|&j| out.sigma[j]).collect();
    Ok(SvdFactors { u, sigma, v, rank })
}

/// Every singular value, non-increasing, without truncation.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let tall = if m.rows() < m.cols() { m.adjoint() } else { m.clone() };
    let out = jacobi_tall(&tall)?;
    Ok(out.order.iter().map(|&j| out.sigma[j]).collect())
}

/// Moore–Penrose pseudo-inverse `V · diag(1/σ) · Uᴴ` over the detected rank.
pub fn pseudo_inverse(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let f = svd(m, rank_tol)?;
    let vs = ComplexMatrix::from_fn(f.v.rows(), f.rank, |i, j| f.v[(i, j)] / f.sigma[j]);
    Ok(&vs * &f.u.adjoint())
}

/// Number of singular values above `rank_tol · σ_max`.
pub fn numerical_rank(m: &ComplexMatrix, rank_tol: f64) -> Result<usize> {
    Ok(svd(m, rank_tol)?.rank)
}
