//! Householder QR, with and without column pivoting.

use super::matrix::{phase, vec_norm, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Economy factors of a column-pivoted QR decomposition truncated to the
/// detected numerical rank: `m[:, perm] ≈ q · r`.
#[derive(Debug, Clone)]
pub struct QrFactors {
    /// `rows x rank`, orthonormal columns.
    pub q: ComplexMatrix,
    /// `rank x cols`, upper trapezoidal with a real non-negative,
    /// non-increasing diagonal. Square when the input has full column rank.
    pub r: ComplexMatrix,
    /// Column `j` of the permuted input is column `perm[j]` of the input.
    pub perm: Vec<usize>,
    pub rank: usize,
}

impl QrFactors {
    /// The input with its columns permuted by `perm`.
    pub fn permuted(&self, m: &ComplexMatrix) -> ComplexMatrix {
        m.select_columns(&self.perm)
    }
}

struct Householder {
    v: Vec<C64>,
    tau: f64,
}

/// Untruncated factorization: R is `min(rows, cols) x cols`, the
/// reflectors are kept so Q can be formed with any number of columns.
struct RawQr {
    r: ComplexMatrix,
    reflectors: Vec<Option<Householder>>,
    perm: Vec<usize>,
    rows: usize,
}

fn householder_factor(m: &ComplexMatrix, pivot: bool) -> RawQr {
    let (rows, cols) = m.shape();
    let steps = rows.min(cols);
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..cols).collect();
    let mut reflectors = Vec::with_capacity(steps);

    for k in 0..steps {
        if pivot {
            let trailing_norm = |j: usize| (k..rows).map(|i| a[(i, j)].norm_sqr()).sum::<f64>();
            let mut best = k;
            let mut best_norm = trailing_norm(k);
            for j in k + 1..cols {
                let nj = trailing_norm(j);
                if nj > best_norm {
                    best = j;
                    best_norm = nj;
                }
            }
            a.swap_columns(k, best);
            perm.swap(k, best);
        }

        let x: Vec<C64> = (k..rows).map(|i| a[(i, k)]).collect();
        let norm_x = vec_norm(&x);
        if norm_x == 0.0 {
            reflectors.push(None);
            continue;
        }
        let alpha = -phase(x[0]) * norm_x;
        let mut v = x;
        v[0] -= alpha;
        let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sqr == 0.0 {
            reflectors.push(None);
            continue;
        }
        let tau = 2.0 / v_norm_sqr;
        for j in k + 1..cols {
            let s: C64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * a[(k + t, j)]).sum();
            let s = s * tau;
            for (t, vi) in v.iter().enumerate() {
                a[(k + t, j)] -= s * vi;
            }
        }
        a[(k, k)] = alpha;
        for i in k + 1..rows {
            a[(i, k)] = ZERO;
        }
        reflectors.push(Some(Householder { v, tau }));
    }

    let r = ComplexMatrix::from_fn(steps, cols, |i, j| if j >= i { a[(i, j)] } else { ZERO });
    RawQr {
        r,
        reflectors,
        perm,
        rows,
    }
}

impl RawQr {
    /// First `ncols` columns of `H_0 H_1 ... H_{s-1}`.
    fn form_q(&self, ncols: usize) -> ComplexMatrix {
        let mut q = ComplexMatrix::from_fn(self.rows, ncols, |i, j| if i == j { ONE } else { ZERO });
        for (k, refl) in self.reflectors.iter().enumerate().rev() {
            let Some(h) = refl else { continue };
            for j in 0..ncols {
                let s: C64 = h.v.iter().enumerate().map(|(t, vi)| vi.conj() * q[(k + t, j)]).sum();
                let s = s * h.tau;
                for (t, vi) in h.v.iter().enumerate() {
                    q[(k + t, j)] -= s * vi;
                }
            }
        }
        q
    }
}

/// Rotates phases so `r`'s diagonal is real and non-negative.
fn normalize_phases(q: &mut ComplexMatrix, r: &mut ComplexMatrix) {
    for i in 0..r.rows().min(q.cols()) {
        let d = r[(i, i)];
        if d.norm() == 0.0 {
            continue;
        }
        let ph = phase(d);
        for j in i..r.cols() {
            r[(i, j)] *= ph.conj();
        }
        r[(i, i)] = C64::new(r[(i, i)].re.max(0.0), 0.0);
        for row in 0..q.rows() {
            q[(row, i)] *= ph;
        }
    }
}

/// Column-pivoted (rank-revealing) economy QR.
///
/// The rank is the number of diagonal entries of the full pivoted R with
/// magnitude above `rank_tol * |r_00|`; `q` and `r` are truncated to it.
/// An all-zero input yields rank 0 and empty factors.
pub fn qr_economy_pivoted(m: &ComplexMatrix, rank_tol: f64) -> Result<QrFactors> {
    if m.cols() == 0 {
        return Err(Error::Contract("QR of a matrix with no columns".into()));
    }
    if !(rank_tol > 0.0) {
        return Err(Error::Contract(format!("rank_tol must be positive, got {rank_tol}")));
    }
    let raw = householder_factor(m, true);
    let lead = if raw.r.rows() > 0 { raw.r[(0, 0)].norm() } else { 0.0 };
    let rank = (0..raw.r.rows())
        .take_while(|&i| lead > 0.0 && raw.r[(i, i)].norm() > rank_tol * lead)
        .count();
    let mut q = raw.form_q(rank);
    let mut r = raw.r.leading_rows(rank);
    normalize_phases(&mut q, &mut r);
    Ok(QrFactors {
        q,
        r,
        perm: raw.perm,
        rank,
    })
}

/// Unpivoted economy QR (`m = q · r`, `q` is `rows x min(rows, cols)`),
/// with the diagonal of `r` made real and non-negative.
pub fn qr_economy(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let raw = householder_factor(m, false);
    let steps = raw.r.rows();
    let mut q = raw.form_q(steps);
    let mut r = raw.r;
    normalize_phases(&mut q, &mut r);
    (q, r)
}

/// Solves `r · x = b` for upper-triangular square `r`.
pub(crate) fn back_substitute(r: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = r.rows();
    let mut x = ComplexMatrix::zeros(n, b.cols());
    for col in 0..b.cols() {
        for i in (0..n).rev() {
            let mut s = b[(i, col)];
            for j in i + 1..n {
                s -= r[(i, j)] * x[(j, col)];
            }
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                return Err(Error::Singular { column: i, pivot: 0.0 });
            }
            x[(i, col)] = s / d;
        }
    }
    Ok(x)
}

/// Pseudo-inverse through the QR route `P · R⁻¹ · Qᴴ`, valid only for
/// full column rank. Used to cross-check the SVD route.
pub fn pseudo_inverse_qr(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let f = qr_economy_pivoted(m, rank_tol)?;
    if f.rank != m.cols() {
        return Err(Error::Contract(format!(
            "QR pseudo-inverse needs full column rank, detected rank {} of {}",
            f.rank,
            m.cols()
        )));
    }
    let y = back_substitute(&f.r, &f.q.adjoint())?;
    let mut out = ComplexMatrix::zeros(m.cols(), m.rows());
    for (j, &src) in f.perm.iter().enumerate() {
        for i in 0..m.rows() {
            out[(src, i)] = y[(j, i)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_factors_trivially() {
        let f = qr_economy_pivoted(&ComplexMatrix::identity(3), 1e-10).unwrap();
        assert_eq!(f.rank, 3);
        assert!(f.r.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
        for j in 0..3 {
            let col = f.q.column(j);
            assert!((col[f.perm[j]].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn single_column_of_ones() {
        let m = ComplexMatrix::from_real_rows(&[&[1.], &[1.]]).unwrap();
        let f = qr_economy_pivoted(&m, 1e-10).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(f.rank, 1);
        assert!((f.r[(0, 0)].re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(f.r[(0, 0)].im, 0.0);
        assert!((f.q[(0, 0)] - C64::new(s, 0.)).norm() < 1e-15);
        assert!((f.q[(1, 0)] - C64::new(s, 0.)).norm() < 1e-15);
    }

    #[test]
    fn rank_one_square() {
        let m = ComplexMatrix::from_real_rows(&[&[1., 2.], &[2., 4.]]).unwrap();
        let f = qr_economy_pivoted(&m, 1e-10).unwrap();
        assert_eq!(f.rank, 1);
        assert_eq!(f.q.shape(), (2, 1));
        assert_eq!(f.r.shape(), (1, 2));
        assert_eq!(f.perm[0], 1);
        assert!((&f.q * &f.r).max_abs_diff(&f.permuted(&m)) < 1e-14);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let f = qr_economy_pivoted(&ComplexMatrix::zeros(3, 2), 1e-10).unwrap();
        assert_eq!(f.rank, 0);
        assert_eq!(f.q.shape(), (3, 0));
        assert_eq!(f.r.shape(), (0, 2));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(qr_economy_pivoted(&ComplexMatrix::zeros(2, 0), 1e-10).is_err());
        assert!(qr_economy_pivoted(&ComplexMatrix::identity(2), 0.0).is_err());
    }

    #[test]
    fn pivoted_diagonal_is_non_increasing() {
        let m = ComplexMatrix::from_fn(5, 4, |i, j| {
            C64::new((i * 3 + j * 7 % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64)
        });
        let f = qr_economy_pivoted(&m, 1e-12).unwrap();
        for i in 1..f.rank {
            assert!(f.r[(i, i)].re <= f.r[(i - 1, i - 1)].re + 1e-14);
        }
        for i in 0..f.r.rows() {
            for j in 0..i {
                assert_eq!(f.r[(i, j)], ZERO);
            }
        }
        assert!(f.q.orthonormality_defect() < 1e-13);
        assert!((&f.q * &f.r).max_abs_diff(&f.permuted(&m)) < 1e-12);
    }

    #[test]
    fn qr_pseudo_inverse_of_column() {
        let m = ComplexMatrix::from_real_rows(&[&[1.], &[1.]]).unwrap();
        let p = pseudo_inverse_qr(&m, 1e-10).unwrap();
        assert!((p[(0, 0)] - C64::new(0.5, 0.)).norm() < 1e-15);
        assert!((p[(0, 1)] - C64::new(0.5, 0.)).norm() < 1e-15);
    }
}
