//! Per-trial bodies of the verification suites.

use rayon::prelude::*;

use super::config::{ExperimentConfig, Suite};
use super::report::TrialRecord;
use crate::eigen::{eigvals_general, eigvals_hermitian, spectrum_distance};
use crate::error::{Error, Result};
use crate::genmat::{
    derive_seed, hermitian_with_spectrum, random_full_column_rank, random_rank_l, random_unitary,
    MatrixRng,
};
use crate::interlacing::{check_interlacing, classify_real, extract_nonzero, InterlacingReport};
use crate::linalg::{
    determinant, numerical_rank, pseudo_inverse, pseudo_inverse_qr, singular_values, ComplexMatrix,
};
use crate::oracle::charpoly_eigenvalues;
use crate::pseudosim::{inflate_transform, pseudo_similarity, unitary_compression};

/// `pinv(Q)` against `Qᴴ`, per entry.
pub const SUBSUMPTION_PINV_TOL: f64 = 1e-10;
/// `Qᴴ·P·Q` against `Q†·P·Q`, per entry.
pub const SUBSUMPTION_ROUTE_TOL: f64 = 1e-9;
/// Penrose conditions, relative to the magnitude of the compared matrices.
pub const MP_TOL: f64 = 1e-8;
/// Solver eigenvalues against characteristic-polynomial roots.
pub const ORACLE_TOL: f64 = 1e-6;
/// Trace and determinant identities, relative.
pub const IDENTITY_TOL: f64 = 1e-6;
/// Hermitian against general solver on the same Hermitian input.
pub const SOLVER_AGREEMENT_TOL: f64 = 1e-8;
/// Relative singular-value spread above which `H` counts as non-orthonormal
/// (not a scaled partial isometry).
pub const NON_ORTHONORMAL_SPREAD: f64 = 1e-6;

pub(crate) fn trial_seed(config: &ExperimentConfig, suite: Suite, index: usize) -> u64 {
    derive_seed(config.seed, suite.stream(), index as u64)
}

/// Runs `trials` trials in parallel, keeping trial order.
pub(crate) fn par_trials<T: Send>(trials: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..trials).into_par_iter().map(f).collect()
}

struct Dims {
    n: usize,
    k: usize,
    l: usize,
}

fn record(suite: Suite, index: usize, seed: u64, dims: &Dims) -> TrialRecord {
    TrialRecord {
        suite,
        trial_index: index,
        seed,
        n: dims.n,
        k: dims.k,
        l: dims.l,
        passed: false,
        min_lower_margin: None,
        min_upper_margin: None,
        worst_residual: 0.0,
        notes: String::new(),
    }
}

fn failed(mut rec: TrialRecord, err: &Error) -> TrialRecord {
    rec.passed = false;
    rec.notes = format!("error: {err}");
    rec
}

/// Everything an interlace trial measured, beyond its record.
#[derive(Debug, Clone)]
pub struct InterlaceOutcome {
    pub report: InterlacingReport,
    /// Eigenvalues of `P`, sorted.
    pub lambda: Vec<f64>,
    pub zero_count: usize,
    pub detected_rank: usize,
    /// Largest `|imag|` in the transform's spectrum.
    pub max_imag: f64,
    /// Whether the transform passed the hermiticity check.
    pub hermitian: bool,
    /// Whether the full-rank factor's nonzero singular values are not all equal.
    pub non_orthonormal: bool,
    /// Distance between the direct and factored routes (rank-deficient suites).
    pub route_gap: Option<f64>,
}

impl InterlaceOutcome {
    pub fn spectral_scale(&self) -> f64 {
        self.lambda.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

fn interlace_dims(config: &ExperimentConfig, suite: Suite, rng: &mut MatrixRng) -> Dims {
    let e = &config.ensemble;
    match suite {
        Suite::InterlaceFullRank => {
            let n = rng.int_in(e.n_min, e.n_max);
            let l = rng.int_in(1, n);
            Dims { n, k: l, l }
        }
        Suite::InterlaceRankDeficient => {
            let n = rng.int_in(e.n_min, e.n_max_deficient);
            let k = rng.int_in(2, n);
            let l = rng.int_in(1, k - 1);
            Dims { n, k, l }
        }
        Suite::InterlaceInflated => {
            let n = rng.int_in(e.n_min, e.n_max_deficient);
            let k = rng.int_in(n + 1, e.k_max);
            let l = rng.int_in(1, n - 1);
            Dims { n, k, l }
        }
        other => unreachable!("{other} is not an interlace suite"),
    }
}

fn spread_exceeds(h: &ComplexMatrix, threshold: f64) -> Result<bool> {
    let s = singular_values(h)?;
    let (max, min) = (s[0], s[s.len() - 1]);
    Ok(max > 0.0 && (max - min) / max > threshold)
}

fn interlace_body(
    config: &ExperimentConfig,
    suite: Suite,
    dims: &Dims,
    rng: &mut MatrixRng,
) -> Result<InterlaceOutcome> {
    let tol = &config.tolerances;
    let e = &config.ensemble;
    let drawn = e.spectrum.draw(rng, dims.n)?;
    let p = hermitian_with_spectrum(rng, &drawn);
    let h = random_full_column_rank(rng, dims.n, dims.l, e.condition_cap);
    let non_orthonormal = spread_exceeds(&h, NON_ORTHONORMAL_SPREAD)?;
    let (transform, route_gap) = if suite == Suite::InterlaceFullRank {
        (pseudo_similarity(&p, &h, tol)?, None)
    } else {
        let v = random_unitary(rng, dims.k, dims.l);
        let inflation = inflate_transform(&p, &h, &v, tol)?;
        (inflation.result, Some(inflation.route_gap))
    };
    let lambda = eigvals_hermitian(&p, tol.hermiticity)?.sorted_real()?;
    let spectrum = eigvals_general(&transform.transformed, tol.realness)?;
    let max_imag = spectrum.max_imag();
    classify_real(&spectrum, tol.realness)?;
    let (eta, zero_count) = extract_nonzero(&spectrum, dims.l, tol.zero)?;
    let report = check_interlacing(&lambda, &eta, tol.interlace_abs(&lambda))?;
    Ok(InterlaceOutcome {
        report,
        lambda,
        zero_count,
        detected_rank: transform.input_rank,
        max_imag,
        hermitian: transform.hermitian,
        non_orthonormal,
        route_gap,
    })
}

/// One interlace trial: its record and, unless it errored, what it measured.
pub fn interlace_trial(
    config: &ExperimentConfig,
    suite: Suite,
    index: usize,
) -> (TrialRecord, Option<InterlaceOutcome>) {
    let seed = trial_seed(config, suite, index);
    let mut rng = MatrixRng::new(seed);
    let dims = interlace_dims(config, suite, &mut rng);
    let mut rec = record(suite, index, seed, &dims);
    match interlace_body(config, suite, &dims, &mut rng) {
        Err(err) => (failed(rec, &err), None),
        Ok(out) => {
            let rank_ok = out.detected_rank == dims.l;
            let zeros_ok = out.zero_count == dims.k - dims.l;
            rec.passed = out.report.passed && rank_ok && zeros_ok;
            rec.min_lower_margin = out.report.min_lower_margin();
            rec.min_upper_margin = out.report.min_upper_margin();
            rec.worst_residual = out.max_imag.max(out.route_gap.unwrap_or(0.0));
            rec.notes = format!(
                "rank={} zeros={} hermitian={}",
                out.detected_rank, out.zero_count, out.hermitian
            );
            if let Some(v) = out.report.worst_violation() {
                rec.notes.push_str(&format!(" violated index {}", v.index));
            }
            (rec, Some(out))
        }
    }
}

/// All trials of an interlace suite, with their outcomes.
pub fn interlace_outcomes(
    config: &ExperimentConfig,
    suite: Suite,
) -> Vec<(TrialRecord, Option<InterlaceOutcome>)> {
    par_trials(config.trials, |i| interlace_trial(config, suite, i))
}

fn subsumption_body(config: &ExperimentConfig, dims: &Dims, rng: &mut MatrixRng, rec: &mut TrialRecord) -> Result<()> {
    let tol = &config.tolerances;
    let drawn = config.ensemble.spectrum.draw(rng, dims.n)?;
    let p = hermitian_with_spectrum(rng, &drawn);
    let q = random_unitary(rng, dims.n, dims.l);
    let pinv_err = pseudo_inverse(&q, tol.rank)?.max_abs_diff(&q.adjoint());
    let compressed = unitary_compression(&p, &q, tol)?;
    let general = pseudo_similarity(&p, &q, tol)?;
    let route_gap = compressed.transformed.max_abs_diff(&general.transformed);
    let lambda = eigvals_hermitian(&p, tol.hermiticity)?.sorted_real()?;
    let eta = eigvals_hermitian(&compressed.transformed, tol.hermiticity)?.sorted_real()?;
    let report = check_interlacing(&lambda, &eta, tol.interlace_abs(&lambda))?;
    rec.passed = pinv_err <= SUBSUMPTION_PINV_TOL && route_gap <= SUBSUMPTION_ROUTE_TOL && report.passed;
    rec.min_lower_margin = report.min_lower_margin();
    rec.min_upper_margin = report.min_upper_margin();
    rec.worst_residual = pinv_err.max(route_gap);
    rec.notes = format!("pinv_err={pinv_err:.3e} route_gap={route_gap:.3e}");
    Ok(())
}

fn subsumption_trial(config: &ExperimentConfig, index: usize) -> TrialRecord {
    let seed = trial_seed(config, Suite::Subsumption, index);
    let mut rng = MatrixRng::new(seed);
    let e = &config.ensemble;
    let n = rng.int_in(e.n_min, e.n_max);
    let l = rng.int_in(1, n);
    let dims = Dims { n, k: l, l };
    let mut rec = record(Suite::Subsumption, index, seed, &dims);
    match subsumption_body(config, &dims, &mut rng, &mut rec) {
        Ok(()) => rec,
        Err(err) => failed(rec, &err),
    }
}

const SHAPES: [&str; 3] = ["tall", "wide", "square"];

fn rel_gap(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.max_abs_diff(b) / a.max_abs().max(b.max_abs()).max(1.0)
}

fn mp_body(config: &ExperimentConfig, dims: &Dims, rng: &mut MatrixRng, rec: &mut TrialRecord) -> Result<()> {
    let tol = &config.tolerances;
    let a = random_rank_l(rng, dims.n, dims.k, dims.l, config.ensemble.condition_cap)?;
    let a_pinv = pseudo_inverse(&a, tol.rank)?;
    let aa = &a * &a_pinv;
    let pa = &a_pinv * &a;
    let conditions = [
        rel_gap(&(&aa * &a), &a),
        rel_gap(&(&pa * &a_pinv), &a_pinv),
        rel_gap(&aa.adjoint(), &aa),
        rel_gap(&pa.adjoint(), &pa),
    ];
    let worst = conditions.iter().copied().fold(0.0, f64::max);
    let rank = numerical_rank(&a, tol.rank)?;
    let mut qr_gap = None;
    if dims.l == dims.k {
        qr_gap = Some(rel_gap(&pseudo_inverse_qr(&a, tol.rank)?, &a_pinv));
    }
    rec.passed = worst <= MP_TOL && rank == dims.l && qr_gap.is_none_or(|g| g <= MP_TOL);
    rec.worst_residual = worst.max(qr_gap.unwrap_or(0.0));
    rec.notes.push_str(&format!(
        " rank={rank} penrose=[{:.1e},{:.1e},{:.1e},{:.1e}]",
        conditions[0], conditions[1], conditions[2], conditions[3]
    ));
    if let Some(g) = qr_gap {
        rec.notes.push_str(&format!(" qr_route={g:.1e}"));
    }
    Ok(())
}

fn mp_trial(config: &ExperimentConfig, index: usize) -> TrialRecord {
    let seed = trial_seed(config, Suite::MpAxioms, index);
    let mut rng = MatrixRng::new(seed);
    let shape = index % 3;
    let deficient = (index / 3) % 2 == 1;
    let (rows, cols) = match shape {
        0 => {
            let rows = rng.int_in(2, 10);
            (rows, rng.int_in(1, rows - 1))
        }
        1 => {
            let cols = rng.int_in(2, 10);
            (rng.int_in(1, cols - 1), cols)
        }
        _ => {
            let n = rng.int_in(1, 8);
            (n, n)
        }
    };
    let min = rows.min(cols);
    let rank = if deficient && min >= 2 { rng.int_in(1, min - 1) } else { min };
    let dims = Dims {
        n: rows,
        k: cols,
        l: rank,
    };
    let mut rec = record(Suite::MpAxioms, index, seed, &dims);
    rec.notes = format!("{} {}", SHAPES[shape], if rank < min { "deficient" } else { "full" });
    match mp_body(config, &dims, &mut rng, &mut rec) {
        Ok(()) => rec,
        Err(err) => failed(rec, &err),
    }
}

fn random_hermitian(rng: &mut MatrixRng, n: usize) -> ComplexMatrix {
    let mut h = rng.gaussian_matrix(n, n).hermitian_part();
    for i in 0..n {
        h[(i, i)].im = 0.0;
    }
    h
}

/// Worst deviations measured by one solver-oracle trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleDeviations {
    /// Hermitian solver against the polynomial roots.
    pub hermitian_vs_roots: f64,
    /// General solver against the polynomial roots.
    pub general_vs_roots: f64,
    /// Hermitian against general solver on the Hermitian input.
    pub solver_agreement: f64,
    /// Relative trace error of the general solver.
    pub trace: f64,
    /// Relative determinant error of the general solver.
    pub determinant: f64,
}

impl OracleDeviations {
    pub fn within_tolerance(&self) -> bool {
        self.hermitian_vs_roots <= ORACLE_TOL
            && self.general_vs_roots <= ORACLE_TOL
            && self.solver_agreement <= SOLVER_AGREEMENT_TOL
            && self.trace <= IDENTITY_TOL
            && self.determinant <= IDENTITY_TOL
    }
}

/// Sizes of one solver-oracle trial: `(oracle n ≤ 4, identity n ≤ 6)`.
pub fn oracle_sizes(index: usize) -> (usize, usize) {
    (1 + index % 4, 1 + index % 6)
}

fn oracle_body(config: &ExperimentConfig, index: usize, rng: &mut MatrixRng) -> Result<OracleDeviations> {
    let tol = &config.tolerances;
    let (n, n_id) = oracle_sizes(index);
    let h = random_hermitian(rng, n);
    let g = rng.gaussian_matrix(n, n);
    let h_vals = eigvals_hermitian(&h, tol.hermiticity)?;
    let h_general = eigvals_general(&h, tol.realness)?;
    let g_vals = eigvals_general(&g, tol.realness)?;
    let rel = |d: Option<f64>, scale: f64| d.map_or(f64::INFINITY, |d| d / scale.max(1.0));
    let hermitian_vs_roots = rel(spectrum_distance(h_vals.values(), &charpoly_eigenvalues(&h)), h_vals.scale());
    let general_vs_roots = rel(spectrum_distance(g_vals.values(), &charpoly_eigenvalues(&g)), g_vals.scale());
    let solver_agreement = rel(spectrum_distance(h_vals.values(), h_general.values()), h_vals.scale());

    let m = rng.gaussian_matrix(n_id, n_id);
    let spectrum = eigvals_general(&m, tol.realness)?;
    let tr = m.trace();
    let det = determinant(&m)?;
    let trace = (spectrum.sum() - tr).norm() / tr.norm().max(1.0);
    let determinant = (spectrum.product() - det).norm() / det.norm().max(f64::MIN_POSITIVE);
    Ok(OracleDeviations {
        hermitian_vs_roots,
        general_vs_roots,
        solver_agreement,
        trace,
        determinant,
    })
}

/// One solver-oracle trial: its record and, unless it errored, its deviations.
pub fn oracle_trial(config: &ExperimentConfig, index: usize) -> (TrialRecord, Option<OracleDeviations>) {
    let seed = trial_seed(config, Suite::SolverOracle, index);
    let mut rng = MatrixRng::new(seed);
    let (n, n_id) = oracle_sizes(index);
    let dims = Dims { n, k: n, l: n };
    let rec = record(Suite::SolverOracle, index, seed, &dims);
    match oracle_body(config, index, &mut rng) {
        Err(err) => (failed(rec, &err), None),
        Ok(dev) => {
            let mut rec = rec;
            rec.passed = dev.within_tolerance();
            rec.worst_residual = [
                dev.hermitian_vs_roots,
                dev.general_vs_roots,
                dev.solver_agreement,
                dev.trace,
                dev.determinant,
            ]
            .into_iter()
            .fold(0.0, f64::max);
            rec.notes = format!(
                "roots h={:.1e} g={:.1e} agree={:.1e} identities n={n_id} trace={:.1e} det={:.1e}",
                dev.hermitian_vs_roots, dev.general_vs_roots, dev.solver_agreement, dev.trace, dev.determinant
            );
            (rec, Some(dev))
        }
    }
}

/// Records for one non-oblique suite.
pub(crate) fn run_trials(config: &ExperimentConfig, suite: Suite) -> Vec<TrialRecord> {
    match suite {
        Suite::InterlaceFullRank | Suite::InterlaceRankDeficient | Suite::InterlaceInflated => {
            interlace_outcomes(config, suite).into_iter().map(|(r, _)| r).collect()
        }
        Suite::Subsumption => par_trials(config.trials, |i| subsumption_trial(config, i)),
        Suite::MpAxioms => par_trials(config.trials, |i| mp_trial(config, i)),
        Suite::SolverOracle => par_trials(config.trials, |i| oracle_trial(config, i).0),
        Suite::ObliqueCounterexample => unreachable!("handled by the oblique search"),
    }
}
