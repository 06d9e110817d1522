//! Reference computations that do not go through the QR/QL solvers:
//! characteristic polynomials by Faddeev–LeVerrier and their roots by
//! closed forms (degree ≤ 2) or Aberth–Ehrlich iteration (higher degree).
//! Intended for small matrices (n ≤ 4 or so) where the expansion is
//! well conditioned.

use crate::linalg::{ComplexMatrix, C64};

/// Coefficients `c[0..=n]` of `det(xI − m) = Σ c[k] xᵏ`, with `c[n] = 1`.
pub fn characteristic_polynomial(m: &ComplexMatrix) -> Vec<C64> {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.rows();
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    coeffs[n] = C64::new(1.0, 0.0);
    // M_0 = 0; M_k = A·M_{k−1} + c_{n−k+1}·I; c_{n−k} = −tr(A·M_k)/k
    let mut mk = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m * &mk;
        for i in 0..n {
            next[(i, i)] += coeffs[n - k + 1];
        }
        mk = next;
        let am = m * &mk;
        coeffs[n - k] = -am.trace() / k as f64;
    }
    coeffs
}

fn horner(coeffs: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// All complex roots of `Σ coeffs[k] xᵏ` (leading coefficient nonzero).
pub fn polynomial_roots(coeffs: &[C64]) -> Vec<C64> {
    let deg = coeffs.len().saturating_sub(1);
    assert!(deg == 0 || coeffs[deg] != C64::new(0.0, 0.0), "zero leading coefficient");
    match deg {
        0 => Vec::new(),
        1 => vec![-coeffs[0] / coeffs[1]],
        2 => {
            let (a, b, c) = (coeffs[2], coeffs[1], coeffs[0]);
            let disc = (b * b - a * c * 4.0).sqrt();
            // Pick the sign that avoids cancellation.
            let q = if (b.conj() * disc).re >= 0.0 {
                -(b + disc) * 0.5
            } else {
                -(b - disc) * 0.5
            };
            if q == C64::new(0.0, 0.0) {
                vec![C64::new(0.0, 0.0); 2]
            } else {
                vec![q / a, c / q]
            }
        }
        _ => aberth(coeffs),
    }
}

fn aberth(coeffs: &[C64]) -> Vec<C64> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    // Cauchy bound on root moduli.
    let radius = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            C64::from_polar(radius * 0.5, angle)
        })
        .collect();
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let (p, dp) = horner(&monic, z[i]);
            if p == C64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repulsion: C64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| C64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    // Newton polish.
    for zi in &mut z {
        for _ in 0..3 {
            let (p, dp) = horner(&monic, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !(step.re.is_finite() && step.im.is_finite()) {
                break;
            }
            *zi -= step;
        }
    }
    z
}

/// Eigenvalues as characteristic-polynomial roots.
pub fn charpoly_eigenvalues(m: &ComplexMatrix) -> Vec<C64> {
    polynomial_roots(&characteristic_polynomial(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn charpoly_of_two_by_two() {
        // [[2,1],[1,2]] → x² − 4x + 3
        let m = ComplexMatrix::from_real_rows(&[&[2., 1.], &[1., 2.]]).unwrap();
        let p = characteristic_polynomial(&m);
        assert_eq!(p, vec![c(3., 0.), c(-4., 0.), c(1., 0.)]);
    }

    #[test]
    fn quadratic_roots() {
        let mut r = polynomial_roots(&[c(1., 0.), c(0., 0.), c(1., 0.)]);
        r.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((r[0] - c(0., -1.)).norm() < 1e-15);
        assert!((r[1] - c(0., 1.)).norm() < 1e-15);
    }

    #[test]
    fn quartic_roots() {
        // (x−1)(x+2)(x−i)(x+3i)
        let roots = [c(1., 0.), c(-2., 0.), c(0., 1.), c(0., -3.)];
        let mut coeffs = vec![c(1., 0.)];
        for r in roots {
            let mut next = vec![c(0., 0.); coeffs.len() + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        let found = polynomial_roots(&coeffs);
        for r in roots {
            assert!(found.iter().any(|f| (f - r).norm() < 1e-12), "{found:?}");
        }
    }
}
