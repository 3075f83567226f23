use rayon::prelude::*;
use serde::Serialize;

use super::cycles::{find_limit_cycles, lower_section_point, LimitCycle};
use super::field::{integrate, RegularizedField, Section, SimConfig, SimErrorKind};
use crate::error::{Error, Result};
use crate::model::NormalForm;
use crate::regularization::Sigmoid;
use crate::sdi::sdi_domain;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationRow {
    pub lambda_tilde: f64,
    pub count: usize,
    pub section_points: Vec<f64>,
    pub multipliers: Vec<f64>,
    /// Scan points whose orbit returned to the section.
    pub returned: usize,
    pub unresolved: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub y_range: (f64, f64),
    pub n_scan: usize,
    pub rows: Vec<BifurcationRow>,
}

impl SweepTable {
    /// Maximal runs of consecutive rows whose count equals `target`, as
    /// `(first λ̃, last λ̃)`.
    pub fn windows(&self, target: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut run: Option<(f64, f64)> = None;
        for r in &self.rows {
            if r.count == target {
                run = Some(run.map_or((r.lambda_tilde, r.lambda_tilde), |(a, _)| (a, r.lambda_tilde)));
            } else if let Some(w) = run.take() {
                out.push(w);
            }
        }
        out.extend(run);
        out
    }
}

/// Section interval swept by the canard cycles `Γ_x`, `x ∈ [x_lo, x_hi]`:
/// the crossings of the lower-field arcs from `(x, 0)` with `{x = 0}`.
pub fn section_range(nf: &NormalForm<f64>, x_lo: f64, x_hi: f64) -> Result<(f64, f64)> {
    let a = lower_section_point(nf, x_lo)?;
    let b = lower_section_point(nf, x_hi)?;
    Ok((a.min(b), a.max(b)))
}

/// Default section interval: canard cycles for `x ∈ [θ, b − θ]`, `θ = b/20`,
/// with `b` the end of the canard family (capped at 2), kept at least
/// `10ε²` below the regularization layer.
pub fn default_section_range(nf: &NormalForm<f64>, epsilon: f64) -> Result<(f64, f64)> {
    let b = sdi_domain(nf).b.finite().unwrap_or(2.0).min(2.0);
    let theta = 0.05 * b;
    let (lo, hi) = section_range(nf, theta, b - theta)?;
    let hi = hi.min(-10.0 * epsilon * epsilon);
    if lo >= hi {
        return Err(Error::Violation(format!(
            "canard family of size {lo} on the section is inside the layer for epsilon = {epsilon}"
        )));
    }
    Ok((lo, hi))
}

fn row(field: &RegularizedField, cfg: &SimConfig, y_range: (f64, f64), n_scan: usize) -> Result<BifurcationRow> {
    let scan = find_limit_cycles(field, cfg, y_range.0, y_range.1, n_scan)?;
    Ok(BifurcationRow {
        lambda_tilde: cfg.lambda_tilde,
        count: scan.cycles.len(),
        section_points: scan.cycles.iter().map(|c: &LimitCycle| c.section_point).collect(),
        multipliers: scan.cycles.iter().map(|c| c.multiplier).collect(),
        returned: scan.samples.iter().filter(|s| s.1.is_some()).count(),
        unresolved: scan.unresolved.len(),
    })
}

/// Cycle counts for each `λ̃` in `values`, in the given order.
pub fn sweep_lambda_values(
    nf: &NormalForm<f64>,
    phi: Sigmoid,
    cfg: &SimConfig,
    values: &[f64],
    y_range: (f64, f64),
    n_scan: usize,
) -> Result<SweepTable> {
    cfg.validate()?;
    let rows = values
        .par_iter()
        .map(|&lt| {
            let c = cfg.with_lambda_tilde(lt);
            row(&RegularizedField::new(nf, phi, &c), &c, y_range, n_scan)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { y_range, n_scan, rows })
}

/// Uniform sweep of `n` values over `[lo, hi]`.
pub fn sweep_lambda(
    nf: &NormalForm<f64>,
    phi: Sigmoid,
    cfg: &SimConfig,
    range: (f64, f64),
    n: usize,
    y_range: (f64, f64),
    n_scan: usize,
) -> Result<SweepTable> {
    if n < 16 {
        return Err(Error::Violation(format!("sweep needs at least 16 points, got {n}")));
    }
    let values: Vec<f64> = (0..n)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
        .collect();
    sweep_lambda_values(nf, phi, cfg, &values, y_range, n_scan)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalLambda {
    /// Largest value seen whose probe orbit does not escape upward.
    pub below: f64,
    /// Smallest value seen whose probe orbit escapes upward.
    pub above: f64,
    pub iterations: usize,
}

/// Whether the orbit from `(0, y_probe)` leaves the layer upward and exits
/// the box through `y > 0` before returning to the section.
pub fn escapes_upward(nf: &NormalForm<f64>, phi: Sigmoid, cfg: &SimConfig, y_probe: f64) -> bool {
    let field = RegularizedField::new(nf, phi, cfg);
    match integrate(&field, cfg, [0.0, y_probe], &[Section::return_section()], 1, false) {
        Ok(_) => false,
        Err(e) => e.kind == SimErrorKind::BoxExit && e.partial.end[1] > 0.0,
    }
}

/// Bisection for the `λ̃` at which the probe orbit switches from returning
/// to escaping upward. Requires `escapes_upward` false at `lo`, true at `hi`.
pub fn find_critical_lambda(
    nf: &NormalForm<f64>,
    phi: Sigmoid,
    cfg: &SimConfig,
    y_probe: f64,
    lo: f64,
    hi: f64,
) -> Result<CriticalLambda> {
    cfg.validate()?;
    let up = |lt: f64| escapes_upward(nf, phi, &cfg.with_lambda_tilde(lt), y_probe);
    if up(lo) || !up(hi) {
        return Err(Error::Violation(format!(
            "critical unfolding not bracketed by [{lo}, {hi}] from section point {y_probe}"
        )));
    }
    let (mut below, mut above) = (lo, hi);
    let mut iterations = 0;
    while iterations < 200 {
        let mid = 0.5 * (below + above);
        if mid <= below || mid >= above {
            break;
        }
        if up(mid) {
            above = mid;
        } else {
            below = mid;
        }
        iterations += 1;
    }
    Ok(CriticalLambda { below, above, iterations })
}

/// Settings for [`locate_canard_window`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowSearch {
    /// Probe orbits start on the canard cycle through `x = f·b`, tried in order.
    pub probe_fractions: Vec<f64>,
    /// Offsets below the critical value run from `10^-first` to `10^-last`.
    pub first_decade: u32,
    pub last_decade: u32,
    pub per_decade: u32,
    pub n_scan: usize,
    /// Bracket for the critical-value bisection.
    pub lambda_bracket: (f64, f64),
}

impl Default for WindowSearch {
    fn default() -> Self {
        WindowSearch {
            probe_fractions: vec![0.9, 0.5],
            first_decade: 1,
            last_decade: 15,
            per_decade: 4,
            n_scan: 64,
            lambda_bracket: (-1.0, 1.0),
        }
    }
}

impl WindowSearch {
    fn offsets(&self) -> Vec<f64> {
        let n = (self.last_decade - self.first_decade) * self.per_decade;
        (0..=n)
            .map(|k| 10f64.powf(-(self.first_decade as f64) - k as f64 / self.per_decade as f64))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanardWindow {
    pub target: usize,
    pub probe_x: f64,
    pub probe_y: f64,
    pub critical: CriticalLambda,
    pub table: SweepTable,
    /// First run of rows with `count == target`.
    pub window: Option<(f64, f64)>,
}

/// Search for unfolding values with exactly `target` limit cycles.
///
/// The canard window sits exponentially close to the value at which the
/// orbit through a probe point stops returning, so that value is located by
/// bisection first and then approached from below on a geometric grid.
pub fn locate_canard_window(
    nf: &NormalForm<f64>,
    phi: Sigmoid,
    cfg: &SimConfig,
    target: usize,
    search: &WindowSearch,
) -> Result<CanardWindow> {
    cfg.validate()?;
    let b = sdi_domain(nf).b.finite().unwrap_or(2.0).min(2.0);
    let y_range = default_section_range(nf, cfg.epsilon)?;
    let mut last = None;
    for &f in &search.probe_fractions {
        let probe_x = f * b;
        let probe_y = lower_section_point(nf, probe_x)?;
        let (lo, hi) = search.lambda_bracket;
        let critical = match find_critical_lambda(nf, phi, cfg, probe_y, lo, hi) {
            Ok(c) => c,
            Err(e) => {
                last.get_or_insert(Err(e));
                continue;
            }
        };
        let mut values: Vec<f64> = search.offsets().iter().map(|o| critical.below - o).collect();
        values.push(critical.below);
        let table = sweep_lambda_values(nf, phi, cfg, &values, y_range, search.n_scan)?;
        let window = table.windows(target).first().copied();
        let found = window.is_some();
        last = Some(Ok(CanardWindow { target, probe_x, probe_y, critical, table, window }));
        if found {
            break;
        }
    }
    last.unwrap_or_else(|| Err(Error::Violation("no probe fractions given".into())))
}
