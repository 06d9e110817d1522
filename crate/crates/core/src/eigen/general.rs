use super::{iteration_cap, Spectrum};
use crate::error::{Error, Result};
use crate::linalg::{phase, vec_norm, ComplexMatrix, C64, ZERO};

/// Eigenvalues of a general complex square matrix.
///
/// Householder reduction to upper Hessenberg form, then single-shift complex
/// QR iteration with Wilkinson shifts and deflation on negligible
/// sub-diagonal entries. `realness_tol` is recorded in the returned
/// [`Spectrum`] for later classification.
pub fn eigvals_general(m: &ComplexMatrix, realness_tol: f64) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let mut h = hessenberg(m);
    let values = hessenberg_qr(&mut h)?;
    Ok(Spectrum::new(values, realness_tol))
}

fn hessenberg(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut a = m.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let norm_x = vec_norm(&x);
        if norm_x == 0.0 {
            continue;
        }
        let alpha = -phase(x[0]) * norm_x;
        let mut v = x;
        v[0] -= alpha;
        let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sqr == 0.0 {
            continue;
        }
        let tau = 2.0 / v_norm_sqr;
        // Left: rows k+1.., columns k..
        for j in k..n {
            let s: C64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * a[(k + 1 + t, j)]).sum();
            let s = s * tau;
            for (t, vi) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= s * vi;
            }
        }
        // Right: all rows, columns k+1..
        for i in 0..n {
            let s: C64 = v.iter().enumerate().map(|(t, vi)| a[(i, k + 1 + t)] * vi).sum();
            let s = s * tau;
            for (t, vi) in v.iter().enumerate() {
                a[(i, k + 1 + t)] -= s * vi.conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
    a
}

/// Both eigenvalues of `[[a, b], [c, d]]`, the one closer to `d` first.
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let half_tr = (a + d) * 0.5;
    let half_gap = (a - d) * 0.5;
    let disc = (half_gap * half_gap + b * c).sqrt();
    let lo = half_tr - disc;
    let hi = half_tr + disc;
    if (lo - d).norm() <= (hi - d).norm() {
        (lo, hi)
    } else {
        (hi, lo)
    }
}

/// Givens pair `(c, s)` with `[c s; -s̄ c]·[f; g] = [r; 0]`.
fn givens(f: C64, g: C64) -> (f64, C64) {
    if g == ZERO {
        return (1.0, ZERO);
    }
    if f == ZERO {
        return (0.0, g.conj() / g.norm());
    }
    let fa = f.norm();
    let norm = fa.hypot(g.norm());
    (fa / norm, (f / fa) * g.conj() / norm)
}

fn hessenberg_qr(h: &mut ComplexMatrix) -> Result<Vec<C64>> {
    let n = h.rows();
    let cap = iteration_cap(n);
    let mut values: Vec<C64> = Vec::with_capacity(n);
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n;
    let norm_h = h.max_abs();

    while hi > 0 {
        let last = hi - 1;
        // Find the start of the unreduced block ending at `last`.
        let mut lo = last;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if diag == 0.0 {
                diag = norm_h;
            }
            if sub <= f64::EPSILON * diag {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }

        if lo == last {
            values.push(h[(last, last)]);
            hi = last;
            since_deflation = 0;
            continue;
        }
        if lo + 1 == last {
            let (x, y) = eig2(h[(lo, lo)], h[(lo, last)], h[(last, lo)], h[(last, last)]);
            values.push(x);
            values.push(y);
            hi = lo;
            since_deflation = 0;
            continue;
        }

        total += 1;
        since_deflation += 1;
        if total > cap {
            return Err(Error::NoConvergence {
                routine: "hessenberg QR",
                iterations: total - 1,
                partial: values,
            });
        }

        let shift = if since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(last, last)] + h[(last, last - 1)].norm() * 0.75 + h[(last - 1, last - 2)].norm()
        } else {
            eig2(
                h[(last - 1, last - 1)],
                h[(last - 1, last)],
                h[(last, last - 1)],
                h[(last, last)],
            )
            .0
        };

        qr_step(h, lo, last, shift);
    }
    Ok(values)
}

/// One explicit shifted QR step `H − σI = QR, H ← RQ + σI` on the block
/// `lo..=last`.
fn qr_step(h: &mut ComplexMatrix, lo: usize, last: usize, shift: C64) {
    for k in lo..=last {
        h[(k, k)] -= shift;
    }
    let mut rotations = Vec::with_capacity(last - lo);
    for k in lo..last {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=last {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        h[(k + 1, k)] = ZERO;
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        for i in lo..=(k + 1).min(last) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + s.conj() * y;
            h[(i, k + 1)] = -s * x + y * c;
        }
    }
    for k in lo..=last {
        h[(k, k)] += shift;
    }
}
