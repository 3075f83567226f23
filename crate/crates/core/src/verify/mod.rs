//! Self-checks against independent oracles, grouped into named suites.
//!
//! Every suite is deterministic for a given seed; parallel work is collected
//! in input order before any reduction, so the summary does not depend on
//! the number of worker threads.

pub mod golden;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use suites::{lemma_branches, random_normal_form, LemmaBranch};

pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    HalfmapOracle,
    HalfmapAnalytics,
    SdiQuadrature,
    Factorization,
    TheoremRandom,
    CaseTable,
    PhiIndependence,
    Symmetry,
    Geometry,
    TwoCycle,
    SingleCycle,
}

impl SuiteId {
    pub const ALL: [SuiteId; 11] = [
        SuiteId::HalfmapOracle,
        SuiteId::HalfmapAnalytics,
        SuiteId::SdiQuadrature,
        SuiteId::Factorization,
        SuiteId::TheoremRandom,
        SuiteId::CaseTable,
        SuiteId::PhiIndependence,
        SuiteId::Symmetry,
        SuiteId::Geometry,
        SuiteId::TwoCycle,
        SuiteId::SingleCycle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::HalfmapOracle => "halfmap-oracle",
            SuiteId::HalfmapAnalytics => "halfmap-analytics",
            SuiteId::SdiQuadrature => "sdi-quadrature",
            SuiteId::Factorization => "factorization",
            SuiteId::TheoremRandom => "theorem-random",
            SuiteId::CaseTable => "case-table",
            SuiteId::PhiIndependence => "phi-independence",
            SuiteId::Symmetry => "symmetry",
            SuiteId::Geometry => "geometry",
            SuiteId::TwoCycle => "two-cycle",
            SuiteId::SingleCycle => "single-cycle",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Parameter draws for the randomized zero-count suite.
    pub random_draws: usize,
    /// Draws per lemma branch in the geometry suite.
    pub lemma_draws: usize,
    /// Regularization scale for the simulation suites.
    pub epsilon: f64,
    /// Hausdorff acceptance constant: cycles must lie within `C·ε` of a
    /// canard cycle. An engineering calibration, not a derived bound.
    pub hausdorff_c: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 20240601,
            random_draws: 1000,
            lemma_draws: 100,
            epsilon: 0.1,
            hausdorff_c: 3.0,
        }
    }
}

/// Failure messages kept per suite.
pub const MAX_REPORTED_FAILURES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: SuiteId,
    pub pass: bool,
    pub checks: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
    /// Named measurements (worst errors, located values).
    pub metrics: BTreeMap<String, f64>,
}

impl SuiteResult {
    fn new(suite: SuiteId) -> Self {
        SuiteResult {
            suite,
            pass: true,
            checks: 0,
            failure_count: 0,
            failures: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(msg());
        }
    }

    fn fail(&mut self, msg: String) {
        self.pass = false;
        self.failure_count += 1;
        if self.failures.len() < MAX_REPORTED_FAILURES {
            self.failures.push(msg);
        }
    }

    fn metric(&mut self, name: &str, v: f64) {
        self.metrics.insert(name.to_string(), v);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub schema_version: u32,
    pub config: VerifyConfig,
    pub pass: bool,
    pub suites: Vec<SuiteResult>,
}

pub fn run_suite(id: SuiteId, cfg: &VerifyConfig) -> SuiteResult {
    match id {
        SuiteId::HalfmapOracle => suites::halfmap_oracle(),
        SuiteId::HalfmapAnalytics => suites::halfmap_analytics(),
        SuiteId::SdiQuadrature => suites::sdi_quadrature(),
        SuiteId::Factorization => suites::factorization(),
        SuiteId::TheoremRandom => suites::theorem_random(cfg),
        SuiteId::CaseTable => suites::case_table(),
        SuiteId::PhiIndependence => suites::phi_independence(),
        SuiteId::Symmetry => suites::symmetry(),
        SuiteId::Geometry => suites::geometry(cfg),
        SuiteId::TwoCycle => suites::two_cycle(cfg),
        SuiteId::SingleCycle => suites::single_cycle(cfg),
    }
}

/// Run the selected suites (all when `only` is empty), in catalog order.
pub fn run(cfg: &VerifyConfig, only: &[SuiteId]) -> VerifySummary {
    let suites: Vec<SuiteResult> = SuiteId::ALL
        .into_iter()
        .filter(|id| only.is_empty() || only.contains(id))
        .map(|id| run_suite(id, cfg))
        .collect();
    VerifySummary {
        schema_version: SUMMARY_SCHEMA_VERSION,
        config: cfg.clone(),
        pass: suites.iter().all(|s| s.pass),
        suites,
    }
}
