use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by the transforms, checks and the experiment
/// runner. All values are relative to a scale named per field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Singular values (or pivots) at or below `rank · σ_max` are treated as zero.
    pub rank: f64,
    /// Hermiticity threshold, relative to the max-entry magnitude.
    pub hermiticity: f64,
    /// Agreement between two computation routes, relative to `max(1, spectral scale)`.
    pub cross: f64,
    /// Allowed max-entry deviation of `qᴴq` from the identity.
    pub orthonormality: f64,
    /// Additive slack in the interlacing inequalities, relative to `max(1, max|λ|)`.
    pub interlace: f64,
    /// Largest tolerated `|imag|` of a "real" eigenvalue, relative to `max(1, scale)`.
    pub realness: f64,
    /// Largest tolerated magnitude of a structural zero, relative to the spectral scale.
    pub zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: 1e-10,
            hermiticity: 1e-10,
            cross: 1e-8,
            orthonormality: 1e-10,
            interlace: 1e-7,
            realness: 1e-8,
            zero: 1e-6,
        }
    }
}

impl Tolerances {
    /// Absolute interlacing slack for a reference spectrum.
    pub fn interlace_abs(&self, lambda: &[f64]) -> f64 {
        let scale = lambda.iter().map(|x| x.abs()).fold(0.0, f64::max);
        self.interlace * scale.max(1.0)
    }
}
