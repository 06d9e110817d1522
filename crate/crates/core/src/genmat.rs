//! Seeded random test ensembles.
//!
//! Every generator draws from [`MatrixRng`], a xoshiro256** stream seeded
//! through SplitMix64 (the `seed_from_u64` expansion of `rand_xoshiro`).
//! Conversions are fixed so other implementations can reproduce the draws:
//!
//! * uniform `[0, 1)`: `(next_u64 >> 11) · 2⁻⁵³`
//! * integer in `lo..=hi`: `lo + ((next_u64 · span) >> 64)` with 128-bit product
//! * complex standard normal (`E|z|² = 1`): Box–Muller on `u₁ = 1 − uniform`,
//!   `u₂ = uniform`, giving `√(−ln u₁) · (cos 2πu₂ + i sin 2πu₂)`
//! * real standard normal: `√(−2 ln u₁) · cos 2πu₂` from the same pair
//!
//! Generators come in a complex flavour and a `real_` flavour whose entries
//! have zero imaginary part.
//!
//! Per-trial seeds come from [`derive_seed`].

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{qr_economy, ComplexMatrix, C64, ONE};
use crate::pseudosim::build_rank_deficient;
use crate::Tolerances;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` of stream `stream` under `master`:
/// `splitmix64(splitmix64(master ^ stream·0xD1B54A32D192ED03) + (index+1)·γ)`
/// with γ the SplitMix64 golden gamma.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    let base = splitmix64(master ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
    splitmix64(base.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

#[derive(Debug, Clone)]
pub struct MatrixRng {
    inner: Xoshiro256StarStar,
}

impl MatrixRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi, "empty integer range {lo}..={hi}");
        let span = (hi - lo) as u128 + 1;
        lo + ((self.next_u64() as u128 * span) >> 64) as usize
    }

    pub fn complex_normal(&mut self) -> C64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        C64::new(r * theta.cos(), r * theta.sin())
    }

    pub fn real_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn real_gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(self.real_normal(), 0.0))
    }

    fn gaussian_in(&mut self, field: Field, rows: usize, cols: usize) -> ComplexMatrix {
        match field {
            Field::Complex => self.gaussian_matrix(rows, cols),
            Field::Real => self.real_gaussian_matrix(rows, cols),
        }
    }

    /// `count` distinct indices from `0..n`, in increasing order.
    pub fn distinct_indices(&mut self, n: usize, count: usize) -> Vec<usize> {
        assert!(count <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..count {
            let j = self.int_in(i, n - 1);
            pool.swap(i, j);
        }
        let mut out = pool[..count].to_vec();
        out.sort_unstable();
        out
    }
}

/// Distribution of a prescribed Hermitian spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum SpectrumLaw {
    Prescribed { values: Vec<f64> },
    Uniform { lo: f64, hi: f64 },
    /// Magnitudes uniform in `[gap, bound]`, independent random sign.
    SignedUniform { bound: f64, gap: f64 },
}

impl Default for SpectrumLaw {
    fn default() -> Self {
        SpectrumLaw::SignedUniform { bound: 2.0, gap: 0.1 }
    }
}

impl SpectrumLaw {
    /// `n` eigenvalues, sorted non-decreasing.
    pub fn draw(&self, rng: &mut MatrixRng, n: usize) -> Result<Vec<f64>> {
        let mut values = match self {
            SpectrumLaw::Prescribed { values } => {
                if values.len() != n {
                    return Err(Error::Contract(format!(
                        "prescribed spectrum has {} values for n = {n}",
                        values.len()
                    )));
                }
                values.clone()
            }
            SpectrumLaw::Uniform { lo, hi } => (0..n).map(|_| rng.uniform_in(*lo, *hi)).collect(),
            SpectrumLaw::SignedUniform { bound, gap } => (0..n)
                .map(|_| {
                    let mag = rng.uniform_in(*gap, *bound);
                    if rng.next_u64() >> 63 == 1 {
                        -mag
                    } else {
                        mag
                    }
                })
                .collect(),
        };
        values.sort_by(f64::total_cmp);
        Ok(values)
    }
}

/// A single seeded draw specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub spectrum_law: SpectrumLaw,
    pub condition_cap: f64,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.l < 1 || self.l > self.n.min(self.k) {
            return Err(Error::Contract(format!(
                "rank {} outside 1..={} for n = {}, k = {}",
                self.l,
                self.n.min(self.k),
                self.n,
                self.k
            )));
        }
        if let SpectrumLaw::Prescribed { values } = &self.spectrum_law {
            if values.len() != self.n {
                return Err(Error::Contract("prescribed spectrum length differs from n".into()));
            }
        }
        if !(self.condition_cap >= 1.0) {
            return Err(Error::Contract("condition cap must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Complex,
    Real,
}

fn unitary_in(rng: &mut MatrixRng, field: Field, n: usize, l: usize) -> ComplexMatrix {
    assert!(l >= 1 && l <= n, "random_unitary needs 1 <= l <= n (l = {l}, n = {n})");
    let g = rng.gaussian_in(field, n, l);
    qr_economy(&g).0
}

/// `n x l` matrix with orthonormal columns: QR of a complex Gaussian matrix
/// with the diagonal of R normalized to be positive.
pub fn random_unitary(rng: &mut MatrixRng, n: usize, l: usize) -> ComplexMatrix {
    unitary_in(rng, Field::Complex, n, l)
}

/// Real counterpart of [`random_unitary`] (orthonormal real columns).
pub fn random_real_orthogonal(rng: &mut MatrixRng, n: usize, l: usize) -> ComplexMatrix {
    unitary_in(rng, Field::Real, n, l)
}

/// `U · diag(λ) · Uᴴ` for a random unitary `U`, made exactly Hermitian.
pub fn hermitian_with_spectrum(rng: &mut MatrixRng, lambda: &[f64]) -> ComplexMatrix {
    with_spectrum_in(rng, Field::Complex, lambda)
}

/// Real symmetric matrix with spectrum `lambda`.
pub fn real_symmetric_with_spectrum(rng: &mut MatrixRng, lambda: &[f64]) -> ComplexMatrix {
    with_spectrum_in(rng, Field::Real, lambda)
}

fn with_spectrum_in(rng: &mut MatrixRng, field: Field, lambda: &[f64]) -> ComplexMatrix {
    assert!(!lambda.is_empty(), "empty spectrum");
    let n = lambda.len();
    let u = unitary_in(rng, field, n, n);
    let ud = ComplexMatrix::from_fn(n, n, |i, j| u[(i, j)] * lambda[j]);
    let mut p = (&ud * &u.adjoint()).hermitian_part();
    for i in 0..n {
        p[(i, i)].im = 0.0;
    }
    p
}

/// `n x L` 0/1 selection matrix whose columns are `e_{indices[j]}`
/// (indices are zero-based).
pub fn selection_matrix(indices: &[usize], n: usize) -> Result<ComplexMatrix> {
    check_selection(indices, n)?;
    let mut m = ComplexMatrix::zeros(n, indices.len());
    for (j, &i) in indices.iter().enumerate() {
        m[(i, j)] = ONE;
    }
    Ok(m)
}

pub(crate) fn check_selection(indices: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for &i in indices {
        if i >= n {
            return Err(Error::Contract(format!("selection index {i} out of range 0..{n}")));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Contract(format!("duplicate selection index {i}")));
        }
    }
    Ok(())
}

/// Product `U · diag(s) · Vᴴ` with unitary factors.
fn with_singular_values(rng: &mut MatrixRng, field: Field, n: usize, s: &[f64]) -> ComplexMatrix {
    let l = s.len();
    let u = unitary_in(rng, field, n, l);
    let v = unitary_in(rng, field, l, l);
    let us = ComplexMatrix::from_fn(n, l, |i, j| u[(i, j)] * s[j]);
    &us * &v.adjoint()
}

/// `n x l` matrix of full column rank with `σ_max = 1` and singular values
/// log-uniform in `[1/condition_cap, 1]`.
pub fn random_full_column_rank(
    rng: &mut MatrixRng,
    n: usize,
    l: usize,
    condition_cap: f64,
) -> ComplexMatrix {
    assert!(l >= 1 && l <= n, "random_full_column_rank needs 1 <= l <= n");
    assert!(condition_cap >= 1.0, "condition cap below 1");
    let log_cap = condition_cap.ln();
    let s: Vec<f64> = (0..l).map(|_| (-log_cap * rng.uniform()).exp()).collect();
    with_singular_values(rng, Field::Complex, n, &s)
}

/// `n x k` matrix of rank `l`, built as `H · Vᴴ` with `H` full column rank
/// and `V` (`k x l`) column-unitary. `k` may exceed `n`.
pub fn random_rank_l(
    rng: &mut MatrixRng,
    n: usize,
    k: usize,
    l: usize,
    condition_cap: f64,
) -> Result<ComplexMatrix> {
    if l < 1 || l > n.min(k) {
        return Err(Error::Contract(format!("rank {l} outside 1..={}", n.min(k))));
    }
    let h = random_full_column_rank(rng, n, l, condition_cap);
    let v = random_unitary(rng, k, l);
    build_rank_deficient(&h, &v, &Tolerances::default())
}

/// Invertible `n x n` matrix whose condition number is drawn log-uniformly
/// from `[nonunitarity_floor, condition_cap]`; `σ_max = 1`.
pub fn random_invertible_nonunitary(
    rng: &mut MatrixRng,
    n: usize,
    condition_cap: f64,
    nonunitarity_floor: f64,
) -> Result<ComplexMatrix> {
    invertible_in(rng, Field::Complex, n, condition_cap, nonunitarity_floor)
}

/// Real counterpart of [`random_invertible_nonunitary`].
pub fn random_real_invertible_nonunitary(
    rng: &mut MatrixRng,
    n: usize,
    condition_cap: f64,
    nonunitarity_floor: f64,
) -> Result<ComplexMatrix> {
    invertible_in(rng, Field::Real, n, condition_cap, nonunitarity_floor)
}

fn invertible_in(
    rng: &mut MatrixRng,
    field: Field,
    n: usize,
    condition_cap: f64,
    nonunitarity_floor: f64,
) -> Result<ComplexMatrix> {
    if !(nonunitarity_floor > 1.0) || !(condition_cap >= nonunitarity_floor) {
        return Err(Error::Contract(format!(
            "need 1 < floor <= cap, got floor {nonunitarity_floor}, cap {condition_cap}"
        )));
    }
    if n < 2 {
        return Err(Error::Contract("a 1x1 matrix scaled to σ_max = 1 is unitary".into()));
    }
    let (lo, hi) = (nonunitarity_floor.ln(), condition_cap.ln());
    let cond = (lo + (hi - lo) * rng.uniform()).exp();
    let mut s = vec![1.0; n];
    s[n - 1] = 1.0 / cond;
    for value in s.iter_mut().take(n - 1).skip(1) {
        *value = (-cond.ln() * rng.uniform()).exp();
    }
    Ok(with_singular_values(rng, field, n, &s))
}
