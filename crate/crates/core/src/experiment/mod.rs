//! Batch experiment runner: seeded suites, the oblique counterexample search
//! and report rendering.
//!
//! Trial `i` of suite `s` draws from its own generator seeded with
//! `derive_seed(master, s.stream(), i)`, so any record can be replayed alone
//! and trials may run in parallel without affecting output order.

mod config;
mod oblique;
mod report;
mod suites;

pub use config::{EnsembleConfig, ExperimentConfig, ObliqueConfig, OutputConfig, ReportFormat, Suite, DEFAULT_SEED};
pub use oblique::{counterexample_search, search_arm, Arm, ArmOutcome, Witness, RECHECK_FACTOR};
pub use report::{
    all_theorems_hold, emit_report, open_output, parse_json_lines, write_report, TrialRecord, CSV_COLUMNS,
    OBLIQUE_ARM_PREFIX,
};
pub use suites::{
    interlace_outcomes, interlace_trial, oracle_sizes, oracle_trial, InterlaceOutcome, OracleDeviations,
    IDENTITY_TOL, MP_TOL, NON_ORTHONORMAL_SPREAD, ORACLE_TOL, SOLVER_AGREEMENT_TOL, SUBSUMPTION_PINV_TOL,
    SUBSUMPTION_ROUTE_TOL,
};

use crate::error::Result;

/// Runs every configured suite in order and returns all records. A failing
/// trial is recorded and the run continues.
pub fn run_suite(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    let mut records = Vec::new();
    for &suite in &config.suites {
        if suite == Suite::ObliqueCounterexample {
            records.extend(counterexample_search(config).iter().map(|o| o.to_record(config)));
        } else {
            records.extend(suites::run_trials(config, suite));
        }
    }
    Ok(records)
}
