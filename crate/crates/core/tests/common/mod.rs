//! Reference checks written independently of the library's solvers.

#![allow(dead_code)]

use pseudosim::linalg::{ComplexMatrix, C64};

/// Largest relative mismatch between `Σ λᵢᵏ` and `tr(Mᵏ)` for `k = 1..=n`.
/// The power sums determine the eigenvalue multiset.
pub fn power_sum_mismatch(m: &ComplexMatrix, eigenvalues: &[C64]) -> f64 {
    let n = m.rows();
    let scale = eigenvalues.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut power = ComplexMatrix::identity(n);
    let mut worst: f64 = 0.0;
    for k in 1..=n {
        power = &power * m;
        let trace: C64 = (0..n).map(|i| power[(i, i)]).sum();
        let sum: C64 = eigenvalues.iter().map(|z| z.powi(k as i32)).sum();
        worst = worst.max((trace - sum).norm() / scale.powi(k as i32));
    }
    worst
}

/// Eigenvalues of a 1x1 or 2x2 matrix from the quadratic formula.
pub fn small_eigenvalues(m: &ComplexMatrix) -> Vec<C64> {
    match m.rows() {
        1 => vec![m[(0, 0)]],
        2 => {
            let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
            let half_tr = (a + d) / 2.0;
            let disc = ((a - d) * (a - d) / 4.0 + b * c).sqrt();
            vec![half_tr - disc, half_tr + disc]
        }
        n => panic!("no closed form for order {n}"),
    }
}

/// Checks `λ_l − tol ≤ η_l ≤ λ_{N−L+l} + tol` after sorting both lists.
pub fn interlaces(lambda: &[f64], eta: &[f64], tol: f64) -> bool {
    let mut lambda = lambda.to_vec();
    let mut eta = eta.to_vec();
    lambda.sort_by(f64::total_cmp);
    eta.sort_by(f64::total_cmp);
    let (n, l) = (lambda.len(), eta.len());
    l <= n && (0..l).all(|i| lambda[i] - tol <= eta[i] && eta[i] <= lambda[n - l + i] + tol)
}

fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn max_abs(a: &ComplexMatrix) -> f64 {
    a.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Worst of the four Penrose residuals, each relative to `max(1, max entry)`.
pub fn penrose_residual(a: &ComplexMatrix, g: &ComplexMatrix) -> f64 {
    let rel = |x: &ComplexMatrix, y: &ComplexMatrix| max_diff(x, y) / max_abs(x).max(max_abs(y)).max(1.0);
    let ag = a * g;
    let ga = g * a;
    let conj_t = |m: &ComplexMatrix| ComplexMatrix::from_fn(m.cols(), m.rows(), |i, j| m[(j, i)].conj());
    [
        rel(&(&ag * a), a),
        rel(&(&ga * g), g),
        rel(&conj_t(&ag), &ag),
        rel(&conj_t(&ga), &ga),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}
