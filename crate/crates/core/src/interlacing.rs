//! Interlacing checks `λ_l ≤ η_l ≤ λ_{N−L+l}` and structural-zero
//! extraction for spectra of rank-deficient transforms.

use serde::Serialize;

use crate::eigen::{real_parts_checked, Spectrum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexCheck {
    /// One-based position `l` in `1..=L`.
    pub index: usize,
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    /// `η_l − λ_l`
    pub lower_margin: f64,
    /// `λ_{N−L+l} − η_l`
    pub upper_margin: f64,
}

impl IndexCheck {
    fn holds(&self, tol: f64) -> bool {
        self.lower_margin >= -tol && self.upper_margin >= -tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlacingReport {
    pub n: usize,
    pub l: usize,
    pub lambda: Vec<f64>,
    pub eta: Vec<f64>,
    pub per_index: Vec<IndexCheck>,
    pub passed: bool,
    /// `L = 0`: nothing to check.
    pub vacuous: bool,
    pub tol_used: f64,
}

impl InterlacingReport {
    pub fn min_lower_margin(&self) -> Option<f64> {
        self.per_index.iter().map(|c| c.lower_margin).reduce(f64::min)
    }

    pub fn min_upper_margin(&self) -> Option<f64> {
        self.per_index.iter().map(|c| c.upper_margin).reduce(f64::min)
    }

    /// The index whose worse margin is most negative, if any fails.
    pub fn worst_violation(&self) -> Option<&IndexCheck> {
        self.per_index
            .iter()
            .filter(|c| !c.holds(self.tol_used))
            .min_by(|a, b| {
                a.lower_margin
                    .min(a.upper_margin)
                    .total_cmp(&b.lower_margin.min(b.upper_margin))
            })
    }
}

fn require_sorted(values: &[f64], name: &str) -> Result<()> {
    if values.iter().any(|x| x.is_nan()) {
        return Err(Error::Contract(format!("{name} contains NaN")));
    }
    if values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Contract(format!("{name} is not sorted non-decreasing")));
    }
    Ok(())
}

/// Checks `λ_l − tol ≤ η_l ≤ λ_{N−L+l} + tol` for `l = 1..=L`.
pub fn check_interlacing(lambda: &[f64], eta: &[f64], tol: f64) -> Result<InterlacingReport> {
    let (n, l) = (lambda.len(), eta.len());
    if l > n {
        return Err(Error::Dimension(format!("{l} values cannot interlace {n}")));
    }
    require_sorted(lambda, "lambda")?;
    require_sorted(eta, "eta")?;
    let per_index: Vec<IndexCheck> = eta
        .iter()
        .enumerate()
        .map(|(i, &value)| {
            let lower = lambda[i];
            let upper = lambda[n - l + i];
            IndexCheck {
                index: i + 1,
                lower,
                value,
                upper,
                lower_margin: value - lower,
                upper_margin: upper - value,
            }
        })
        .collect();
    let passed = per_index.iter().all(|c| c.holds(tol));
    Ok(InterlacingReport {
        n,
        l,
        lambda: lambda.to_vec(),
        eta: eta.to_vec(),
        per_index,
        passed,
        vacuous: l == 0,
        tol_used: tol,
    })
}

/// Splits a real spectrum of length `K` into `expected_l` eigenvalues and
/// `K − expected_l` structural zeros.
///
/// The zeros are the `K − expected_l` values of smallest magnitude; each
/// must lie within `zero_tol · scale` of zero (scale = largest magnitude),
/// otherwise a classification error is raised. Returns the remaining values
/// sorted non-decreasing and the zero count.
pub fn extract_nonzero(spectrum: &Spectrum, expected_l: usize, zero_tol: f64) -> Result<(Vec<f64>, usize)> {
    let k = spectrum.len();
    if expected_l > k {
        return Err(Error::Dimension(format!(
            "expected {expected_l} nonzero eigenvalues from a spectrum of length {k}"
        )));
    }
    let values = spectrum.sorted_real()?;
    let mut by_magnitude = values;
    by_magnitude.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let zeros = k - expected_l;
    let threshold = zero_tol * spectrum.scale();
    let worst = by_magnitude[..zeros].iter().map(|x| x.abs()).fold(0.0, f64::max);
    if worst > threshold {
        return Err(Error::Classification {
            expected_zeros: zeros,
            threshold,
            worst,
        });
    }
    let mut nonzero = by_magnitude[zeros..].to_vec();
    nonzero.sort_by(f64::total_cmp);
    Ok((nonzero, zeros))
}

/// Real parts of `spectrum` sorted non-decreasing, provided every
/// `|imag| <= realness_tol · max(1, max|value|)`.
pub fn classify_real(spectrum: &Spectrum, realness_tol: f64) -> Result<Vec<f64>> {
    real_parts_checked(spectrum.values(), realness_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn diagonal_selection_passes() {
        let r = check_interlacing(&[1., 2., 3.], &[1., 2.], 0.0).unwrap();
        assert!(r.passed);
        assert_eq!(r.per_index[0].upper, 2.0);
        assert_eq!(r.per_index[1].lower, 2.0);
        assert_eq!(r.min_lower_margin(), Some(0.0));
    }

    #[test]
    fn interior_value_passes() {
        let r = check_interlacing(&[1., 3.], &[2.], 1e-12).unwrap();
        assert!(r.passed);
        assert_eq!(r.per_index[0].lower_margin, 1.0);
        assert_eq!(r.per_index[0].upper_margin, 1.0);
    }

    #[test]
    fn out_of_range_fails() {
        let r = check_interlacing(&[1., 2., 3.], &[5.], 1e-7).unwrap();
        assert!(!r.passed);
        let v = r.worst_violation().unwrap();
        assert_eq!(v.index, 1);
        assert_eq!(v.upper_margin, -2.0);
    }

    #[test]
    fn equal_spectra_have_zero_margins() {
        let lambda = [-1., 0.5, 2., 2., 7.];
        let r = check_interlacing(&lambda, &lambda, 0.0).unwrap();
        assert!(r.passed);
        assert!(r.per_index.iter().all(|c| c.lower_margin == 0.0 && c.upper_margin == 0.0));
    }

    #[test]
    fn empty_eta_is_vacuous() {
        let r = check_interlacing(&[1., 2.], &[], 0.0).unwrap();
        assert!(r.passed && r.vacuous);
    }

    #[test]
    fn check_errors() {
        assert!(matches!(check_interlacing(&[2., 1.], &[1.], 0.0), Err(Error::Contract(_))));
        assert!(matches!(check_interlacing(&[1.], &[1., 2.], 0.0), Err(Error::Dimension(_))));
    }

    #[test]
    fn extraction_examples() {
        let s = Spectrum::from_real(&[0., 1., 0., 2.], 1e-10);
        assert_eq!(extract_nonzero(&s, 2, 1e-6).unwrap(), (vec![1., 2.], 2));
        let s = Spectrum::from_real(&[1., 0.], 1e-10);
        assert_eq!(extract_nonzero(&s, 1, 1e-6).unwrap(), (vec![1.], 1));
        let s = Spectrum::from_real(&[-3., 0., 4.], 1e-10);
        assert_eq!(extract_nonzero(&s, 2, 1e-6).unwrap(), (vec![-3., 4.], 1));
    }

    #[test]
    fn extraction_rejects_large_candidate_zeros() {
        let s = Spectrum::from_real(&[0.5, 1., 2.], 1e-10);
        assert!(matches!(extract_nonzero(&s, 1, 1e-6), Err(Error::Classification { .. })));
    }

    #[test]
    fn extraction_rejects_complex_spectrum() {
        let s = Spectrum::new(vec![C64::new(0., 1.), C64::new(0., -1.)], 1e-10);
        assert!(matches!(extract_nonzero(&s, 2, 1e-6), Err(Error::NotReal { .. })));
    }

    #[test]
    fn classify_examples() {
        let s = Spectrum::new(vec![C64::new(3., 1e-14), C64::new(1., -2e-15)], 0.0);
        assert_eq!(classify_real(&s, 1e-10).unwrap(), vec![1., 3.]);
        let s = Spectrum::new(vec![C64::new(0., 1.), C64::new(0., -1.)], 0.0);
        assert!(classify_real(&s, 1e-10).is_err());
        assert!(classify_real(&Spectrum::new(vec![], 0.0), 1e-10).unwrap().is_empty());
    }
}
