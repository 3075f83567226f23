//! One line per acceptance criterion, each backed by a verification suite.
//! Criterion 12 reruns the whole catalog on 1 and 8 worker threads and
//! compares the serialized summaries byte for byte. Runs without the libtest
//! harness so the lines are never captured.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use vi3_core::verify::{run, run_suite, SuiteId, SuiteResult, VerifyConfig};

struct Criterion {
    number: u32,
    title: &'static str,
    suite: SuiteId,
    budget: Option<Duration>,
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

const CRITERIA: [Criterion; 11] = [
    Criterion { number: 1, title: "half-map oracle equivalence", suite: SuiteId::HalfmapOracle, budget: secs(60) },
    Criterion { number: 2, title: "half-map analytics", suite: SuiteId::HalfmapAnalytics, budget: None },
    Criterion { number: 3, title: "SDI closed form vs quadrature", suite: SuiteId::SdiQuadrature, budget: None },
    Criterion { number: 4, title: "derivative factorization", suite: SuiteId::Factorization, budget: None },
    Criterion { number: 5, title: "randomized zero count", suite: SuiteId::TheoremRandom, budget: secs(300) },
    Criterion { number: 6, title: "case table", suite: SuiteId::CaseTable, budget: None },
    Criterion { number: 7, title: "regularization independence", suite: SuiteId::PhiIndependence, budget: None },
    Criterion { number: 8, title: "reflection identity", suite: SuiteId::Symmetry, budget: None },
    Criterion { number: 9, title: "geometry", suite: SuiteId::Geometry, budget: None },
    Criterion { number: 10, title: "two-cycle construction", suite: SuiteId::TwoCycle, budget: secs(600) },
    Criterion { number: 11, title: "single-cycle stability", suite: SuiteId::SingleCycle, budget: secs(300) },
];

fn line(number: u32, title: &str, pass: bool, detail: &str) -> String {
    format!("criterion {number:>2} {:<4} {title}: {detail}", if pass { "PASS" } else { "FAIL" })
}

fn describe(r: &SuiteResult, elapsed: Duration) -> String {
    let mut s = format!("{} checks, {} failed, {:.1}s", r.checks, r.failure_count, elapsed.as_secs_f64());
    if let Some(first) = r.failures.first() {
        s.push_str(&format!("; first failure: {first}"));
    }
    s
}

fn serialized_on(threads: usize, cfg: &VerifyConfig) -> String {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let summary = pool.install(|| run(cfg, &[]));
    serde_json::to_string_pretty(&summary).unwrap()
}

fn main() -> ExitCode {
    let cfg = VerifyConfig::default();
    let mut all_pass = true;

    for c in &CRITERIA {
        let start = Instant::now();
        let r = run_suite(c.suite, &cfg);
        let elapsed = start.elapsed();
        let in_budget = c.budget.is_none_or(|b| elapsed <= b);
        let mut detail = describe(&r, elapsed);
        if !in_budget {
            detail.push_str(&format!("; over the {}s budget", c.budget.unwrap().as_secs()));
        }
        let pass = r.pass && in_budget;
        all_pass &= pass;
        println!("{}", line(c.number, c.title, pass, &detail));
    }

    let first = serialized_on(1, &cfg);
    let second = serialized_on(8, &cfg);
    let third = serialized_on(1, &cfg);
    let identical = first == second && first == third;
    let detail = if identical {
        format!("{} bytes, identical on 1, 8 and 1 threads", first.len())
    } else {
        "summaries differ between runs".to_string()
    };
    all_pass &= identical;
    println!("{}", line(12, "determinism", identical, &detail));

    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
