use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genmat::SpectrumLaw;
use crate::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    InterlaceFullRank,
    InterlaceRankDeficient,
    InterlaceInflated,
    Subsumption,
    ObliqueCounterexample,
    MpAxioms,
    SolverOracle,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::InterlaceFullRank,
        Suite::InterlaceRankDeficient,
        Suite::InterlaceInflated,
        Suite::Subsumption,
        Suite::ObliqueCounterexample,
        Suite::MpAxioms,
        Suite::SolverOracle,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Suite::InterlaceFullRank => "interlace-full-rank",
            Suite::InterlaceRankDeficient => "interlace-rank-deficient",
            Suite::InterlaceInflated => "interlace-inflated",
            Suite::Subsumption => "subsumption",
            Suite::ObliqueCounterexample => "oblique-counterexample",
            Suite::MpAxioms => "mp-axioms",
            Suite::SolverOracle => "solver-oracle",
        }
    }

    /// Stream id fed to [`crate::genmat::derive_seed`].
    pub fn stream(self) -> u64 {
        match self {
            Suite::InterlaceFullRank => 1,
            Suite::InterlaceRankDeficient => 2,
            Suite::InterlaceInflated => 3,
            Suite::Subsumption => 4,
            Suite::ObliqueCounterexample => 5,
            Suite::MpAxioms => 6,
            Suite::SolverOracle => 7,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.tag() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Suite::ALL.iter().map(|s| s.tag()).collect();
                Error::Config(format!("unknown suite '{s}' (known: {})", known.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportFormat {
    #[default]
    Table,
    Csv,
    JsonLines,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            "json-lines" => Ok(ReportFormat::JsonLines),
            other => Err(Error::Config(format!(
                "unknown format '{other}' (expected table, csv or json-lines)"
            ))),
        }
    }
}

/// Dimension ranges and draw laws for the random suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleConfig {
    /// `N` range for the full-rank and subsumption suites.
    pub n_min: usize,
    pub n_max: usize,
    /// Largest `N` for the rank-deficient and inflated suites.
    pub n_max_deficient: usize,
    /// Largest `K` for the inflated suite (must exceed `n_max_deficient`).
    pub k_max: usize,
    pub condition_cap: f64,
    pub spectrum: SpectrumLaw,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            n_min: 2,
            n_max: 16,
            n_max_deficient: 12,
            k_max: 24,
            condition_cap: 1e3,
            spectrum: SpectrumLaw::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObliqueConfig {
    pub n: usize,
    pub condition_cap: f64,
    pub nonunitarity_floor: f64,
}

impl Default for ObliqueConfig {
    fn default() -> Self {
        Self {
            n: 3,
            condition_cap: 100.0,
            nonunitarity_floor: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Standard output when absent.
    pub path: Option<PathBuf>,
    pub format: ReportFormat,
}

/// Everything a run needs. Parsed from TOML; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub trials: usize,
    pub ensemble: EnsembleConfig,
    pub oblique: ObliqueConfig,
    pub tolerances: Tolerances,
    pub output: OutputConfig,
}

pub const DEFAULT_SEED: u64 = 42;

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            suites: Suite::ALL.to_vec(),
            seed: DEFAULT_SEED,
            trials: 500,
            ensemble: EnsembleConfig::default(),
            oblique: ObliqueConfig::default(),
            tolerances: Tolerances::default(),
            output: OutputConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.trials < 1 {
            return fail("trials must be at least 1".into());
        }
        if self.suites.is_empty() {
            return fail("no suites selected".into());
        }
        let e = &self.ensemble;
        if e.n_min < 2 || e.n_min > e.n_max {
            return fail(format!("need 2 <= n_min <= n_max, got {}..{}", e.n_min, e.n_max));
        }
        if e.n_max_deficient < e.n_min {
            return fail("n_max_deficient must be at least n_min".into());
        }
        if e.k_max <= e.n_max_deficient {
            return fail("k_max must exceed n_max_deficient so inflated draws exist".into());
        }
        if !(e.condition_cap >= 1.0) {
            return fail("ensemble.condition_cap must be at least 1".into());
        }
        let o = &self.oblique;
        if o.n < 2 {
            return fail("oblique.n must be at least 2".into());
        }
        if !(o.nonunitarity_floor > 1.0 && o.condition_cap >= o.nonunitarity_floor) {
            return fail("oblique needs 1 < nonunitarity_floor <= condition_cap".into());
        }
        let t = &self.tolerances;
        let all = [
            t.rank,
            t.hermiticity,
            t.cross,
            t.orthonormality,
            t.interlace,
            t.realness,
            t.zero,
        ];
        if all.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return fail("tolerances must be finite and positive".into());
        }
        Ok(())
    }
}
