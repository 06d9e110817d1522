//! Search for oblique-transform draws whose spectrum fails to interlace.
//!
//! Three arms share one trial loop over real symmetric `P`: the oblique arm
//! draws a real non-unitary `X`, the control arms use a unitary `X` or the
//! identity. Real draws keep the selected block real, so its spectrum is real
//! or comes in conjugate pairs; a complex `X` would give a non-real spectrum
//! almost surely and nothing to order. A failing check is
//! only accepted as a witness after an independent recomputation (SVD
//! inverse, characteristic-polynomial eigenvalues) violates the inequality
//! by more than ten times the interlacing slack.

use rayon::prelude::*;

use super::config::{ExperimentConfig, Suite};
use super::report::{TrialRecord, OBLIQUE_ARM_PREFIX};
use crate::eigen::{eigvals_general, eigvals_hermitian, Spectrum};
use crate::error::Result;
use crate::genmat::{
    derive_seed, random_real_invertible_nonunitary, random_unitary, real_symmetric_with_spectrum, MatrixRng,
};
use crate::interlacing::{check_interlacing, classify_real, InterlacingReport};
use crate::linalg::{pseudo_inverse, ComplexMatrix};
use crate::oracle::charpoly_eigenvalues;
use crate::pseudosim::oblique_transform;

/// Matrices up to this order get their eigenvalues from the polynomial oracle
/// during re-verification.
const ORACLE_MAX_ORDER: usize = 4;
/// Re-verification demands a violation this many times the slack.
pub const RECHECK_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    Oblique,
    ControlUnitary,
    ControlIdentity,
}

impl Arm {
    pub const ALL: [Arm; 3] = [Arm::Oblique, Arm::ControlUnitary, Arm::ControlIdentity];

    /// Notes prefix of the arm's summary record.
    pub fn prefix(self) -> &'static str {
        match self {
            Arm::Oblique => OBLIQUE_ARM_PREFIX,
            Arm::ControlUnitary => "control-unitary:",
            Arm::ControlIdentity => "control-identity:",
        }
    }

    fn id(self) -> u64 {
        match self {
            Arm::Oblique => 0,
            Arm::ControlUnitary => 1,
            Arm::ControlIdentity => 2,
        }
    }
}

/// A re-verified interlacing violation.
#[derive(Debug, Clone)]
pub struct Witness {
    pub trial_index: usize,
    pub seed: u64,
    /// Zero-based selected indices.
    pub selection: Vec<usize>,
    pub x: ComplexMatrix,
    pub p: ComplexMatrix,
    /// Report from the primary computation.
    pub report: InterlacingReport,
    /// Report from the independent recomputation, at the primary slack.
    pub recheck: InterlacingReport,
    /// One-based index violated most in the recomputation.
    pub violated_index: usize,
    /// Most negative margin in the recomputation.
    pub margin: f64,
}

#[derive(Debug, Clone)]
pub struct ArmOutcome {
    pub arm: Arm,
    pub n: usize,
    pub trials: usize,
    pub witness: Option<Witness>,
    /// Trials whose transform had a complex spectrum (no ordering to check).
    pub complex_spectra: usize,
    /// Failing checks the recomputation did not confirm.
    pub rejected: usize,
}

enum Trial {
    Complex,
    Holds,
    Rejected,
    Witness(Box<Witness>),
}

fn draw_x(arm: Arm, config: &ExperimentConfig, rng: &mut MatrixRng) -> Result<ComplexMatrix> {
    let o = &config.oblique;
    match arm {
        Arm::Oblique => random_real_invertible_nonunitary(rng, o.n, o.condition_cap, o.nonunitarity_floor),
        Arm::ControlUnitary => Ok(random_unitary(rng, o.n, o.n)),
        Arm::ControlIdentity => Ok(ComplexMatrix::identity(o.n)),
    }
}

fn oracle_spectrum(m: &ComplexMatrix, realness: f64) -> Result<Spectrum> {
    if m.rows() <= ORACLE_MAX_ORDER {
        Ok(Spectrum::new(charpoly_eigenvalues(m), realness))
    } else {
        eigvals_general(m, realness)
    }
}

/// Independent recomputation: `X⁻¹` from the SVD pseudo-inverse, both spectra
/// from the polynomial oracle (small orders).
fn recheck(config: &ExperimentConfig, p: &ComplexMatrix, x: &ComplexMatrix, selection: &[usize]) -> Result<InterlacingReport> {
    let tol = &config.tolerances;
    let x_inv = pseudo_inverse(x, tol.rank)?;
    let block = (&(&x_inv * p) * x).principal_submatrix(selection);
    let lambda = classify_real(&oracle_spectrum(p, tol.realness)?, tol.realness)?;
    let eta = classify_real(&oracle_spectrum(&block, tol.realness)?, tol.realness)?;
    check_interlacing(&lambda, &eta, tol.interlace_abs(&lambda))
}

fn trial(config: &ExperimentConfig, arm: Arm, index: usize) -> Result<Trial> {
    let tol = &config.tolerances;
    let n = config.oblique.n;
    let seed = arm_seed(config, arm, index);
    let mut rng = MatrixRng::new(seed);
    let drawn = config.ensemble.spectrum.draw(&mut rng, n)?;
    let p = real_symmetric_with_spectrum(&mut rng, &drawn);
    let x = draw_x(arm, config, &mut rng)?;
    let l = rng.int_in(1, n - 1);
    let selection = rng.distinct_indices(n, l);
    let transform = oblique_transform(&p, &x, &selection, tol)?;
    let lambda = eigvals_hermitian(&p, tol.hermiticity)?.sorted_real()?;
    let spectrum = eigvals_general(&transform.transformed, tol.realness)?;
    let Ok(eta) = classify_real(&spectrum, tol.realness) else {
        return Ok(Trial::Complex);
    };
    let report = check_interlacing(&lambda, &eta, tol.interlace_abs(&lambda))?;
    if report.passed {
        return Ok(Trial::Holds);
    }
    let Ok(recheck) = recheck(config, &p, &x, &selection) else {
        return Ok(Trial::Rejected);
    };
    let demanded = RECHECK_FACTOR * recheck.tol_used;
    let worst = recheck
        .per_index
        .iter()
        .map(|c| (c.index, c.lower_margin.min(c.upper_margin)))
        .min_by(|a, b| a.1.total_cmp(&b.1));
    match worst {
        Some((violated_index, margin)) if margin < -demanded => Ok(Trial::Witness(Box::new(Witness {
            trial_index: index,
            seed,
            selection,
            x,
            p,
            report,
            recheck,
            violated_index,
            margin,
        }))),
        _ => Ok(Trial::Rejected),
    }
}

fn arm_seed(config: &ExperimentConfig, arm: Arm, index: usize) -> u64 {
    derive_seed(config.seed, (Suite::ObliqueCounterexample.stream() << 8) | arm.id(), index as u64)
}

/// Runs one arm over the trial budget and keeps the first witness. Errored
/// trials count as rejected.
pub fn search_arm(config: &ExperimentConfig, arm: Arm) -> ArmOutcome {
    let results: Vec<Trial> = (0..config.trials)
        .into_par_iter()
        .map(|i| trial(config, arm, i).unwrap_or(Trial::Rejected))
        .collect();
    let mut outcome = ArmOutcome {
        arm,
        n: config.oblique.n,
        trials: config.trials,
        witness: None,
        complex_spectra: 0,
        rejected: 0,
    };
    for r in results {
        match r {
            Trial::Complex => outcome.complex_spectra += 1,
            Trial::Holds => {}
            Trial::Rejected => outcome.rejected += 1,
            Trial::Witness(w) => {
                if outcome.witness.is_none() {
                    outcome.witness = Some(*w);
                }
            }
        }
    }
    outcome
}

/// All three arms.
pub fn counterexample_search(config: &ExperimentConfig) -> Vec<ArmOutcome> {
    Arm::ALL.iter().map(|&arm| search_arm(config, arm)).collect()
}

impl ArmOutcome {
    /// The arm's summary record. The oblique arm passes when it found a
    /// witness, the control arms when they found none.
    pub fn to_record(&self, config: &ExperimentConfig) -> TrialRecord {
        let counts = format!(
            "trials={} complex={} rejected={}",
            self.trials, self.complex_spectra, self.rejected
        );
        let mut rec = TrialRecord {
            suite: Suite::ObliqueCounterexample,
            trial_index: self.trials,
            seed: config.seed,
            n: self.n,
            k: 0,
            l: 0,
            passed: (self.arm == Arm::Oblique) == self.witness.is_some(),
            min_lower_margin: None,
            min_upper_margin: None,
            worst_residual: 0.0,
            notes: String::new(),
        };
        match &self.witness {
            Some(w) => {
                let l = w.selection.len();
                rec.trial_index = w.trial_index;
                rec.seed = w.seed;
                rec.k = l;
                rec.l = l;
                rec.min_lower_margin = w.recheck.min_lower_margin();
                rec.min_upper_margin = w.recheck.min_upper_margin();
                rec.worst_residual = w
                    .report
                    .eta
                    .iter()
                    .zip(&w.recheck.eta)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                rec.notes = format!(
                    "{} witness selection={:?} violated index {} margin {:.3e} {counts}",
                    self.arm.prefix(),
                    w.selection,
                    w.violated_index,
                    w.margin
                );
            }
            None => rec.notes = format!("{} no witness {counts}", self.arm.prefix()),
        }
        rec
    }
}
