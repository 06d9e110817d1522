//! Eigenvalues of Hermitian and general complex square matrices.

mod general;
mod hermitian;

pub use general::eigvals_general;
pub use hermitian::eigvals_hermitian;

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linalg::{vec_norm, ComplexMatrix, C64};

/// Iteration budget for both solvers: `30 · n` QR/QL steps in total.
pub(crate) fn iteration_cap(n: usize) -> usize {
    30 * n.max(1)
}

/// Multiset of eigenvalues ordered by real part, ties broken by imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<C64>,
    realness_tol: f64,
}

fn cmp_complex(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl Spectrum {
    pub fn new(mut values: Vec<C64>, realness_tol: f64) -> Self {
        values.sort_by(cmp_complex);
        Self {
            values,
            realness_tol,
        }
    }

    pub fn from_real(values: &[f64], realness_tol: f64) -> Self {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect(), realness_tol)
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn realness_tol(&self) -> f64 {
        self.realness_tol
    }

    /// Largest eigenvalue magnitude (0 when empty).
    pub fn scale(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Real parts, sorted, provided every `|imag| <= realness_tol · max(1, scale)`.
    pub fn sorted_real(&self) -> Result<Vec<f64>> {
        real_parts_checked(&self.values, self.realness_tol)
    }

    pub fn sum(&self) -> C64 {
        self.values.iter().sum()
    }

    pub fn product(&self) -> C64 {
        self.values.iter().product()
    }
}

pub(crate) fn real_parts_checked(values: &[C64], realness_tol: f64) -> Result<Vec<f64>> {
    let scale = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let bound = realness_tol * scale.max(1.0);
    let offending: Vec<C64> = values.iter().copied().filter(|z| z.im.abs() > bound).collect();
    if !offending.is_empty() {
        return Err(Error::NotReal { offending });
    }
    let mut re: Vec<f64> = values.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    Ok(re)
}

/// Largest pairwise distance under a greedy nearest-neighbour assignment of
/// `a` onto `b` (both visited in spectrum order). `None` on length mismatch.
pub fn spectrum_distance(a: &[C64], b: &[C64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut a_sorted = a.to_vec();
    a_sorted.sort_by(cmp_complex);
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in &a_sorted {
        let (best, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        used[best] = true;
        worst = worst.max(dist);
    }
    Some(worst)
}

/// True when the two multisets pair up within `tol` per pair.
pub fn spectra_match(a: &[C64], b: &[C64], tol: f64) -> bool {
    spectrum_distance(a, b).is_some_and(|d| d <= tol)
}

/// `‖m·v − value·v‖₂ / ‖v‖₂`.
pub fn eig_residual(m: &ComplexMatrix, value: C64, vector: &[C64]) -> Result<f64> {
    if !m.is_square() || vector.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "residual of a {}x{} matrix against a length-{} vector",
            m.rows(),
            m.cols(),
            vector.len()
        )));
    }
    let norm = vec_norm(vector);
    if norm == 0.0 {
        return Err(Error::Contract("residual against the zero vector".into()));
    }
    let mv = m.mul_vec(vector);
    let diff: Vec<C64> = mv.iter().zip(vector).map(|(a, b)| a - value * b).collect();
    Ok(vec_norm(&diff) / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn spectrum_orders_by_real_then_imag() {
        let s = Spectrum::new(vec![c(1., 2.), c(0., 0.), c(1., -1.)], 1e-10);
        assert_eq!(s.values(), &[c(0., 0.), c(1., -1.), c(1., 2.)]);
    }

    #[test]
    fn sorted_real_rejects_complex_pairs() {
        let s = Spectrum::new(vec![c(0., 1.), c(0., -1.)], 1e-10);
        assert!(matches!(s.sorted_real(), Err(Error::NotReal { .. })));
        let s = Spectrum::new(vec![c(3., 1e-14), c(1., -2e-15)], 1e-10);
        assert_eq!(s.sorted_real().unwrap(), vec![1., 3.]);
    }

    #[test]
    fn residual_examples() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(eig_residual(&id, c(1., 0.), &[c(1., 0.), c(0., 0.)]).unwrap(), 0.0);
        let d = ComplexMatrix::from_diag(&[2., 3.]);
        assert_eq!(eig_residual(&d, c(2., 0.), &[c(1., 0.), c(0., 0.)]).unwrap(), 0.0);
        let s = ComplexMatrix::from_real_rows(&[&[2., 1.], &[1., 2.]]).unwrap();
        assert_eq!(eig_residual(&s, c(3., 0.), &[c(1., 0.), c(1., 0.)]).unwrap(), 0.0);
    }

    #[test]
    fn residual_rejects_zero_vector() {
        let id = ComplexMatrix::identity(2);
        assert!(matches!(
            eig_residual(&id, c(1., 0.), &[c(0., 0.), c(0., 0.)]),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn greedy_matching() {
        let a = [c(0., 1.), c(0., -1.)];
        let b = [c(0., -1.0 + 1e-9), c(0., 1.0)];
        assert!(spectra_match(&a, &b, 1e-8));
        assert!(!spectra_match(&a, &b[..1], 1.0));
    }
}
