use super::{iteration_cap, Spectrum};
use crate::error::{Error, Result};
use crate::linalg::{is_hermitian, phase, vec_norm, ComplexMatrix, C64, ZERO};

/// Eigenvalues of a Hermitian matrix, sorted non-decreasing, with exactly
/// zero imaginary parts.
///
/// `herm_tol` is relative: the input must satisfy
/// `max|m − mᴴ| <= herm_tol · max|m|`. The matrix is reduced to a real
/// symmetric tridiagonal by Householder reflections and a diagonal phase
/// scaling, then diagonalized by implicit-shift QL.
pub fn eigvals_hermitian(m: &ComplexMatrix, herm_tol: f64) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !is_hermitian(m, herm_tol * m.max_abs())? {
        return Err(Error::Contract("eigvals_hermitian called on a non-Hermitian matrix".into()));
    }
    let (mut d, mut e) = tridiagonalize(&m.hermitian_part());
    tql(&mut d, &mut e)?;
    Ok(Spectrum::from_real(&d, herm_tol))
}

/// Householder reduction to tridiagonal form. Returns the real diagonal and
/// the moduli of the sub-diagonal (`e[i]` couples `i` and `i+1`,
/// `e[n-1] = 0`).
fn tridiagonalize(m: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.rows();
    let mut a = m.clone();
    let mut off = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let x: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let norm_x = vec_norm(&x);
        if norm_x == 0.0 {
            continue;
        }
        let alpha = -phase(x[0]) * norm_x;
        let mut v = x;
        v[0] -= alpha;
        let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sqr > 0.0 {
            let tau = 2.0 / v_norm_sqr;
            let len = n - k - 1;
            // B ← B − v wᴴ − w vᴴ with p = τ B v, w = p − (τ vᴴp / 2) v.
            let p: Vec<C64> = (0..len)
                .map(|i| (0..len).map(|j| a[(k + 1 + i, k + 1 + j)] * v[j]).sum::<C64>() * tau)
                .collect();
            let vp: C64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
            let kfac = 0.5 * tau * vp.re;
            let w: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kfac).collect();
            for i in 0..len {
                for j in 0..len {
                    a[(k + 1 + i, k + 1 + j)] -= v[i] * w[j].conj() + w[i] * v[j].conj();
                }
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            a[(i, k)] = ZERO;
            a[(k, i)] = ZERO;
        }
        off[k] = norm_x;
    }
    let d = (0..n).map(|i| a[(i, i)].re).collect();
    (d, off)
}

/// Implicit-shift QL on a symmetric tridiagonal; eigenvalues land in `d`
/// sorted non-decreasing.
fn tql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    let cap = iteration_cap(n);
    let mut total = 0usize;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            total += 1;
            if total > cap {
                let mut partial = d.to_vec();
                partial.truncate(l);
                return Err(Error::NoConvergence {
                    routine: "hermitian QL",
                    iterations: total - 1,
                    partial: partial.into_iter().map(|x| C64::new(x, 0.0)).collect(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reals(s: &Spectrum) -> Vec<f64> {
        s.sorted_real().unwrap()
    }

    #[test]
    fn diagonal_sorted() {
        let s = eigvals_hermitian(&ComplexMatrix::from_diag(&[3., 1., 2.]), 1e-10).unwrap();
        assert_eq!(reals(&s), vec![1., 2., 3.]);
        assert!(s.values().iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn two_by_two_symmetric() {
        let m = ComplexMatrix::from_real_rows(&[&[2., 1.], &[1., 2.]]).unwrap();
        let v = reals(&eigvals_hermitian(&m, 1e-10).unwrap());
        assert!((v[0] - 1.).abs() < 1e-14 && (v[1] - 3.).abs() < 1e-14);
    }

    #[test]
    fn identity_repeated() {
        let v = reals(&eigvals_hermitian(&ComplexMatrix::identity(4), 1e-10).unwrap());
        assert_eq!(v, vec![1.; 4]);
    }

    #[test]
    fn complex_hermitian_two_by_two() {
        // [[2, 1+i], [1-i, 3]]: trace 5, det 6 - 2 = 4 → (5 ± √9)/2 = {1, 4}
        let m = ComplexMatrix::from_rows(&[
            vec![C64::new(2., 0.), C64::new(1., 1.)],
            vec![C64::new(1., -1.), C64::new(3., 0.)],
        ])
        .unwrap();
        let v = reals(&eigvals_hermitian(&m, 1e-10).unwrap());
        assert!((v[0] - 1.).abs() < 1e-14 && (v[1] - 4.).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0., 1.], &[0., 0.]]).unwrap();
        assert!(matches!(eigvals_hermitian(&m, 1e-10), Err(Error::Contract(_))));
        assert!(matches!(
            eigvals_hermitian(&ComplexMatrix::zeros(2, 3), 1e-10),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn empty_and_scalar() {
        assert!(eigvals_hermitian(&ComplexMatrix::zeros(0, 0), 1e-10).unwrap().is_empty());
        let v = reals(&eigvals_hermitian(&ComplexMatrix::from_diag(&[-7.5]), 1e-10).unwrap());
        assert_eq!(v, vec![-7.5]);
    }
}
