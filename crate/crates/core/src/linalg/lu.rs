//! LU with partial pivoting: determinants and inverses.

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Lu {
    /// Packed factors: strict lower part holds L (unit diagonal), upper holds U.
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    /// Factors a square matrix. Fails with [`Error::Singular`] when a pivot
    /// falls to `n · ε · max|m|` or below.
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        Self::factor(m, true)
    }

    /// Factors without the singularity check; zero pivots are kept so the
    /// determinant of a singular matrix comes out as zero.
    fn factor(m: &ComplexMatrix, strict: bool) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let n = m.rows();
        let floor = n as f64 * f64::EPSILON * m.max_abs();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty pivot column");
            if strict && pivot <= floor {
                return Err(Error::Singular { column: k, pivot });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let d = lu[(k, k)];
            if d == ZERO {
                continue;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm, sign })
    }

    pub fn determinant(&self) -> C64 {
        let n = self.lu.rows();
        (0..n).map(|i| self.lu[(i, i)]).product::<C64>() * self.sign
    }

    /// Solves `m · x = b`.
    pub fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let n = self.lu.rows();
        assert_eq!(b.rows(), n, "right-hand side has wrong row count");
        let mut x = b.select_rows(&self.perm);
        for col in 0..b.cols() {
            for i in 0..n {
                let mut s = x[(i, col)];
                for j in 0..i {
                    s -= self.lu[(i, j)] * x[(j, col)];
                }
                x[(i, col)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, col)];
                for j in i + 1..n {
                    s -= self.lu[(i, j)] * x[(j, col)];
                }
                x[(i, col)] = s / self.lu[(i, i)];
            }
        }
        x
    }
}

impl ComplexMatrix {
    pub(crate) fn select_rows(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), self.cols(), |i, j| self[(indices[i], j)])
    }
}

/// Determinant by partial-pivoting LU; zero for exactly singular input.
pub fn determinant(m: &ComplexMatrix) -> Result<C64> {
    if m.rows() == 0 && m.cols() == 0 {
        return Ok(ONE);
    }
    Ok(Lu::factor(m, false)?.determinant())
}

/// Inverse of a square matrix; numerically singular input is an error.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let lu = Lu::new(m)?;
    Ok(lu.solve(&ComplexMatrix::identity(m.rows())))
}
