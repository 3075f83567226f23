use rayon::prelude::*;
use serde::Serialize;

use super::field::{integrate, return_map, RegularizedField, Section, SimConfig};
use crate::error::{Error, Result};
use crate::halfmap::HalfMap;
use crate::model::NormalForm;
use crate::numerics::ode::{Integrator, OdeOptions};
use crate::numerics::root::{brent_with_values, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stability {
    Attracting,
    Repelling,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitCycle {
    pub section_point: f64,
    pub period: f64,
    pub multiplier: f64,
    pub stability: Stability,
    /// `|P(y*) − y*|`.
    pub residual: f64,
    /// One loop as `(x, y)` points, starting and ending on the section.
    pub polyline: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleScan {
    pub cycles: Vec<LimitCycle>,
    /// `(y, P(y))` on the scan grid; `None` where the orbit does not return.
    pub samples: Vec<(f64, Option<f64>)>,
    /// Sign changes of `P(y) − y` that could not be refined to a cycle.
    pub unresolved: Vec<(f64, f64)>,
}

const RESIDUAL_MAX: f64 = 1e-9;

/// Limit cycles crossing the section inside `[y_lo, y_hi]`, located as sign
/// changes of `P(y) − y` on a uniform grid of `n_scan` points.
pub fn find_limit_cycles(
    field: &RegularizedField,
    cfg: &SimConfig,
    y_lo: f64,
    y_hi: f64,
    n_scan: usize,
) -> Result<CycleScan> {
    cfg.validate()?;
    if !(y_lo < y_hi && y_hi < 0.0) {
        return Err(Error::Violation(format!("section range [{y_lo}, {y_hi}] must lie in y < 0")));
    }
    if n_scan < 32 {
        return Err(Error::Violation(format!("n_scan = {n_scan} must be at least 32")));
    }
    let h = (y_hi - y_lo) / (n_scan - 1) as f64;
    let grid: Vec<f64> = (0..n_scan).map(|i| if i + 1 == n_scan { y_hi } else { y_lo + h * i as f64 }).collect();
    let samples: Vec<(f64, Option<f64>)> = grid
        .par_iter()
        .map(|&y| (y, return_map(field, cfg, y, false).ok().map(|r| r.y1)))
        .collect();

    let brackets: Vec<(f64, f64, f64, f64)> = samples
        .windows(2)
        .collect::<Vec<_>>()
        .par_iter()
        .filter_map(|w| match (w[0], w[1]) {
            ((a, Some(pa)), (b, Some(pb))) => {
                let (da, db) = (pa - a, pb - b);
                (da == 0.0 || da.signum() != db.signum()).then_some((a, da, b, db))
            }
            ((a, Some(pa)), (b, None)) => escape_bracket(field, cfg, a, pa - a, b),
            ((a, None), (b, Some(pb))) => escape_bracket(field, cfg, b, pb - b, a),
            _ => None,
        })
        .collect();
    let refined: Vec<std::result::Result<LimitCycle, (f64, f64)>> = brackets
        .par_iter()
        .map(|&(a, da, b, db)| refine_cycle(field, cfg, a, da, b, db).ok_or((a, b)))
        .collect();

    let mut cycles = Vec::new();
    let mut unresolved = Vec::new();
    for r in refined {
        match r {
            Ok(c) => {
                // a root sitting exactly on a grid point shows up in two brackets
                if !cycles.iter().any(|o: &LimitCycle| (o.section_point - c.section_point).abs() <= 1e-12 * (1.0 + c.section_point.abs())) {
                    cycles.push(c)
                }
            }
            Err(b) => unresolved.push(b),
        }
    }
    cycles.sort_by(|a, b| a.section_point.abs().partial_cmp(&b.section_point.abs()).unwrap());
    Ok(CycleScan { cycles, samples, unresolved })
}

/// A fixed point can hide between a returning sample `a` and a sample `b`
/// whose orbit escapes: orbits close to the escape boundary follow the
/// repelling slow manifold further and are displaced the other way. Bisect
/// towards the boundary until a returning point with the opposite
/// displacement is found.
fn escape_bracket(field: &RegularizedField, cfg: &SimConfig, a: f64, da: f64, b: f64) -> Option<(f64, f64, f64, f64)> {
    if da == 0.0 {
        return Some((a, da, a, da));
    }
    let (mut ok, mut bad) = (a, b);
    for _ in 0..60 {
        let mid = 0.5 * (ok + bad);
        if mid == ok || mid == bad {
            break;
        }
        match return_map(field, cfg, mid, false) {
            Ok(r) => {
                let d = r.y1 - mid;
                if d == 0.0 || d.signum() != da.signum() {
                    return Some(if a < mid { (a, da, mid, d) } else { (mid, d, a, da) });
                }
                ok = mid;
            }
            Err(_) => bad = mid,
        }
    }
    None
}

fn refine_cycle(field: &RegularizedField, cfg: &SimConfig, a: f64, da: f64, b: f64, db: f64) -> Option<LimitCycle> {
    let disp = |y: f64| return_map(field, cfg, y, false).map(|r| r.y1 - y).unwrap_or(f64::NAN);
    let tol = Tolerance::default().with_xtol(1e-15, 1e-14);
    let y = if da == 0.0 { a } else { brent_with_values(disp, a, da, b, db, tol).ok()? };
    let at = return_map(field, cfg, y, true).ok()?;
    let residual = (at.y1 - y).abs();
    if residual > RESIDUAL_MAX {
        return None;
    }
    let step = 1e-6 * y.abs();
    let plus = return_map(field, cfg, y + step, false).ok()?;
    let minus = return_map(field, cfg, y - step, false).ok()?;
    let multiplier = (plus.y1 - minus.y1) / (2.0 * step);
    let polyline = at.trajectory?.points.iter().map(|p| [p[1], p[2]]).collect();
    Some(LimitCycle {
        section_point: y,
        period: at.period,
        multiplier,
        stability: if multiplier.abs() < 1.0 { Stability::Attracting } else { Stability::Repelling },
        residual,
        polyline,
    })
}

/// The canard cycle through `(x, 0)`: the lower-field arc from `(x, 0)` to
/// `(Π(x), 0)` followed by the segment back to `(x, 0)`.
pub fn canard_cycle(nf: &NormalForm<f64>, x: f64) -> Result<Vec<[f64; 2]>> {
    let pi_x = HalfMap::new(nf).pi(x)?;
    let lower = nf.lower_field();
    let field = move |p: [f64; 2]| lower.eval(p);
    let opts = OdeOptions { rtol: 1e-12, atol: 1e-14, ..OdeOptions::default() };
    let mut it = Integrator::new(&field, [x, 0.0], opts);
    let mut pts = vec![[x, 0.0]];
    loop {
        let step = it.advance().map_err(|_| Error::NoReturn { x })?;
        if step.y0[1] < 0.0 && step.y1[1] >= 0.0 {
            let (_, p) = it.locate(&step, |p| p[1], 1e-14);
            pts.push([p[0], 0.0]);
            break;
        }
        pts.push(step.y1);
        if step.t1 > 1e4 {
            return Err(Error::NoReturn { x });
        }
    }
    let end = pts.last().unwrap()[0];
    debug_assert!((end - pi_x).abs() < 1e-6 * (1.0 + x.abs()));
    pts.push([x, 0.0]);
    Ok(pts)
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

fn densify(line: &[[f64; 2]], spacing: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(line.len());
    for w in line.windows(2) {
        let len = (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
        let n = (len / spacing).ceil().max(1.0) as usize;
        for k in 0..n {
            let t = k as f64 / n as f64;
            out.push([w[0][0] + t * (w[1][0] - w[0][0]), w[0][1] + t * (w[1][1] - w[0][1])]);
        }
    }
    out.extend(line.last().copied());
    out
}

fn directed(from: &[[f64; 2]], to: &[[f64; 2]]) -> f64 {
    from.par_iter()
        .map(|&p| {
            to.windows(2)
                .map(|w| segment_distance(p, w[0], w[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max)
}

/// Symmetric Hausdorff distance between two polylines. Vertices are
/// densified to `spacing` before the point-to-segment sweep.
pub fn hausdorff_distance(a: &[[f64; 2]], b: &[[f64; 2]], spacing: f64) -> f64 {
    if a.len() < 2 || b.len() < 2 {
        return f64::INFINITY;
    }
    let (da, db) = (densify(a, spacing), densify(b, spacing));
    directed(&da, b).max(directed(&db, a))
}

impl LimitCycle {
    /// Largest `x` among polyline points within `band` of `y = 0`.
    pub fn layer_exit(&self, band: f64) -> Option<f64> {
        self.polyline
            .iter()
            .filter(|p| p[1].abs() <= band)
            .map(|p| p[0])
            .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))))
    }

    /// Hausdorff distance to the canard cycle through the layer exit point.
    pub fn canard_distance(&self, nf: &NormalForm<f64>, epsilon: f64) -> Result<(f64, f64)> {
        let x_hat = self
            .layer_exit(10.0 * epsilon * epsilon)
            .ok_or(Error::Violation("cycle never enters the layer".into()))?;
        let canard = canard_cycle(nf, x_hat)?;
        Ok((x_hat, hausdorff_distance(&self.polyline, &canard, 1e-3)))
    }
}

/// Points of the section hit by the lower-field arcs from `(x, 0)`.
pub fn lower_section_point(nf: &NormalForm<f64>, x: f64) -> Result<f64> {
    let cfg = SimConfig {
        bounding_box: super::field::Rect { x_min: -1e6, x_max: 1e6, y_min: -1e6, y_max: 1e6 },
        max_time: 1e4,
        ..SimConfig::default()
    };
    let field = RegularizedField::lower_only(nf, &cfg);
    let traj = integrate(&field, &cfg, [x, 0.0], &[Section::return_section()], 1, false)
        .map_err(|_| Error::NoReturn { x })?;
    Ok(traj.hits[0].point[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hausdorff_of_offset_segments() {
        let a = [[0.0, 0.0], [1.0, 0.0]];
        let b = [[0.0, 0.5], [2.0, 0.5]];
        let d = hausdorff_distance(&a, &b, 1e-3);
        assert!((d - 0.5f64.hypot(1.0)).abs() < 1e-12);
    }

    #[test]
    fn canard_cycle_closes_at_half_map_image() {
        let nf = NormalForm::reduced(-1.0, 1.0, 2.0, -20.0 / 19.0, 1.0).unwrap();
        let c = canard_cycle(&nf, 0.5).unwrap();
        let pi = HalfMap::new(&nf).pi(0.5).unwrap();
        assert!((c[c.len() - 2][0] - pi).abs() < 1e-9);
        assert!(c.iter().all(|p| p[1] <= 0.0));
    }
}
