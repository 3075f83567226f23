use serde::Serialize;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::model::NormalForm;
use crate::numerics::ode::{Integrator, OdeFailure, OdeOptions, PlanarField, State, Step};
use crate::regularization::{Regularization, Sigmoid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn contains(&self, p: State<f64>) -> bool {
        p[0] >= self.x_min && p[0] <= self.x_max && p[1] >= self.y_min && p[1] <= self.y_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub epsilon: f64,
    pub lambda_tilde: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_time: f64,
    pub bounding_box: Rect,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            epsilon: 0.1,
            lambda_tilde: 0.0,
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_time: 200.0,
            bounding_box: Rect {
                x_min: -50.0,
                x_max: 50.0,
                y_min: -50.0,
                y_max: 50.0,
            },
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Violation(format!("epsilon = {} must lie in (0, 1)", self.epsilon)));
        }
        for (name, v) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(1e-14..=1e-6).contains(&v) {
                return Err(Error::Violation(format!("{name} = {v} must lie in [1e-14, 1e-6]")));
            }
        }
        if !self.lambda_tilde.is_finite() || !(self.max_time > 0.0) {
            return Err(Error::Violation("lambda_tilde must be finite and max_time positive".into()));
        }
        let b = self.bounding_box;
        if !(b.x_min < 0.0 && b.x_max > 0.0 && b.y_min < 0.0 && b.y_max > 0.0) {
            return Err(Error::Violation("bounding box must contain the origin".into()));
        }
        Ok(())
    }

    pub fn with_lambda_tilde(&self, lambda_tilde: f64) -> Self {
        SimConfig { lambda_tilde, ..*self }
    }

    pub fn lambda(&self) -> f64 {
        self.epsilon * self.lambda_tilde
    }

    fn ode_options(&self) -> OdeOptions<f64> {
        OdeOptions {
            rtol: self.rel_tol,
            atol: self.abs_tol,
            h_init: self.epsilon * self.epsilon / 16.0,
            h_min: 1e-15,
            max_steps: 20_000_000,
        }
    }
}

/// The regularized vector field for fixed `(ε, λ̃)`.
#[derive(Debug, Clone, Copy)]
pub struct RegularizedField {
    nf: NormalForm<f64>,
    phi: Sigmoid,
    eps2: f64,
    lambda: f64,
    /// Blend only the lower field (p ≡ 0).
    lower_only: bool,
}

impl RegularizedField {
    pub fn new(nf: &NormalForm<f64>, phi: Sigmoid, cfg: &SimConfig) -> Self {
        RegularizedField {
            nf: *nf,
            phi,
            eps2: cfg.epsilon * cfg.epsilon,
            lambda: cfg.lambda(),
            lower_only: false,
        }
    }

    /// The lower field alone, for comparison with the half-map.
    pub fn lower_only(nf: &NormalForm<f64>, cfg: &SimConfig) -> Self {
        RegularizedField {
            lower_only: true,
            ..Self::new(nf, Sigmoid::default(), cfg)
        }
    }

    pub fn blend(&self, y: f64) -> f64 {
        if self.lower_only {
            0.0
        } else {
            self.phi.value(y / self.eps2)
        }
    }

    pub fn eval_at(&self, x: f64, y: f64) -> State<f64> {
        let nf = &self.nf;
        let lower = [-1.0 + nf.beta_minus() * y, -x + nf.gamma_minus() * y];
        let upper = [
            nf.drift() + nf.alpha_plus() * x + nf.beta_plus() * y,
            nf.delta_plus() * x + nf.gamma_plus() * y + self.lambda,
        ];
        let p = self.blend(y);
        [
            upper[0] * p + lower[0] * (1.0 - p),
            upper[1] * p + lower[1] * (1.0 - p),
        ]
    }
}

impl PlanarField<f64> for RegularizedField {
    fn eval(&self, p: State<f64>) -> State<f64> {
        self.eval_at(p[0], p[1])
    }

    fn max_step(&self, p: State<f64>) -> f64 {
        if !self.lower_only && p[1].abs() <= 10.0 * self.eps2 {
            self.eps2 / 4.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    /// The line `x = level`.
    X,
    /// The line `y = level`.
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Increasing,
    Decreasing,
    Either,
}

/// A line crossed in a given direction, restricted to a range of the other
/// coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Section {
    pub axis: Axis,
    pub level: f64,
    pub direction: Direction,
    pub other_min: f64,
    pub other_max: f64,
}

impl Section {
    /// `{x = 0, y < 0}` crossed with `ẋ < 0`.
    pub fn return_section() -> Self {
        Section {
            axis: Axis::X,
            level: 0.0,
            direction: Direction::Decreasing,
            other_min: f64::NEG_INFINITY,
            other_max: 0.0,
        }
    }

    fn g(&self, p: State<f64>) -> f64 {
        match self.axis {
            Axis::X => p[0] - self.level,
            Axis::Y => p[1] - self.level,
        }
    }

    fn other(&self, p: State<f64>) -> f64 {
        match self.axis {
            Axis::X => p[1],
            Axis::Y => p[0],
        }
    }

    fn crossed(&self, a: State<f64>, b: State<f64>) -> bool {
        let (ga, gb) = (self.g(a), self.g(b));
        match self.direction {
            Direction::Increasing => ga < 0.0 && gb >= 0.0,
            Direction::Decreasing => ga > 0.0 && gb <= 0.0,
            Direction::Either => (ga < 0.0 && gb >= 0.0) || (ga > 0.0 && gb <= 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hit {
    pub section: usize,
    pub t: f64,
    pub point: State<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trajectory {
    /// `(t, x, y)` at accepted steps, when recording was requested.
    pub points: Vec<[f64; 3]>,
    pub hits: Vec<Hit>,
    pub t_end: f64,
    pub end: State<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SimErrorKind {
    BoxExit,
    TimeExhausted,
    StepFailure,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("simulation stopped: {kind:?} at t = {t}", t = partial.t_end)]
pub struct SimError {
    pub kind: SimErrorKind,
    pub partial: Trajectory,
}

/// Event localization tolerance on the section function.
const EVENT_TOL: f64 = 1e-12;

/// Integrate from `init` until `max_hits` section crossings have been
/// recorded, the box is left, or `max_time` elapses.
pub fn integrate(
    field: &RegularizedField,
    cfg: &SimConfig,
    init: State<f64>,
    sections: &[Section],
    max_hits: usize,
    record: bool,
) -> std::result::Result<Trajectory, SimError> {
    let mut traj = Trajectory::default();
    if record {
        traj.points.push([0.0, init[0], init[1]]);
    }
    let stop = |kind, mut traj: Trajectory, t: f64, p: State<f64>| {
        traj.t_end = t;
        traj.end = p;
        Err(SimError { kind, partial: traj })
    };
    if !cfg.bounding_box.contains(init) {
        return stop(SimErrorKind::BoxExit, traj, 0.0, init);
    }
    let mut it = Integrator::new(field, init, cfg.ode_options());
    loop {
        let step: Step<f64> = match it.advance() {
            Ok(s) => s,
            Err(OdeFailure::TooManySteps | OdeFailure::StepTooSmall | OdeFailure::NotFinite) => {
                return stop(SimErrorKind::StepFailure, traj, it.t, it.y);
            }
        };
        // sections first: a crossing inside the last step still counts
        let mut hits: Vec<Hit> = Vec::new();
        for (k, sec) in sections.iter().enumerate() {
            if sec.crossed(step.y0, step.y1) {
                let (t, p) = it.locate(&step, |p| sec.g(p), EVENT_TOL);
                let o = sec.other(p);
                if o > sec.other_min && o < sec.other_max {
                    hits.push(Hit { section: k, t, point: p });
                }
            }
        }
        hits.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
        for h in hits {
            if record {
                traj.points.push([h.t, h.point[0], h.point[1]]);
            }
            traj.hits.push(h);
            if traj.hits.len() >= max_hits {
                traj.t_end = h.t;
                traj.end = h.point;
                return Ok(traj);
            }
        }
        if record {
            traj.points.push([step.t1, step.y1[0], step.y1[1]]);
        }
        if !cfg.bounding_box.contains(step.y1) {
            return stop(SimErrorKind::BoxExit, traj, step.t1, step.y1);
        }
        if step.t1 >= cfg.max_time {
            return stop(SimErrorKind::TimeExhausted, traj, step.t1, step.y1);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnEval {
    pub y0: f64,
    pub y1: f64,
    pub period: f64,
    pub trajectory: Option<Trajectory>,
}

/// First return to `{x = 0, y < 0}` (crossed with `ẋ < 0`) from `(0, y0)`.
pub fn return_map(field: &RegularizedField, cfg: &SimConfig, y0: f64, record: bool) -> Result<ReturnEval> {
    if !(y0 < 0.0) {
        return Err(Error::Violation(format!("section point y0 = {y0} must be negative")));
    }
    let sections = [Section::return_section()];
    match integrate(field, cfg, [0.0, y0], &sections, 1, record) {
        Ok(traj) => {
            let h = traj.hits[0];
            Ok(ReturnEval {
                y0,
                y1: h.point[1],
                period: h.t,
                trajectory: record.then_some(traj),
            })
        }
        Err(_) => Err(Error::NoReturn { x: y0 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn saddle() -> NormalForm<f64> {
        NormalForm::reduced(-1.0, 1.0, 2.0, -20.0 / 19.0, 1.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::default().validate().is_ok());
        let bad = SimConfig { epsilon: 1.5, ..SimConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SimConfig { rel_tol: 1e-16, ..SimConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn field_limits() {
        let cfg = SimConfig::default();
        let nf = saddle();
        let eps2 = cfg.epsilon * cfg.epsilon;
        let x = 0.3;
        // tanh saturates exponentially, so a few layer widths away the field is Z±
        let f = RegularizedField::new(&nf, Sigmoid::Tanh, &cfg);
        let up = nf.upper_field().eval([x, 40.0 * eps2]);
        let v = f.eval_at(x, 40.0 * eps2);
        assert!((v[0] - up[0]).abs() < 1e-12 && (v[1] - up[1]).abs() < 1e-12);
        let lo = nf.lower_field().eval([x, -40.0 * eps2]);
        let v = f.eval_at(x, -40.0 * eps2);
        assert!((v[0] - lo[0]).abs() < 1e-12 && (v[1] - lo[1]).abs() < 1e-12);
        // arctan only decays like 1/s, which does not beat the linear growth
        // of Z⁻ in y; the field is still the exact convex blend
        let f = RegularizedField::new(&nf, Sigmoid::Arctan, &cfg);
        for y in [1e6 * eps2, 3.0 * eps2, -1e6 * eps2] {
            let p = f.blend(y);
            let (u, l) = (nf.upper_field().eval([x, y]), nf.lower_field().eval([x, y]));
            let v = f.eval_at(x, y);
            for k in 0..2 {
                let expected = p * u[k] + (1.0 - p) * l[k];
                assert!((v[k] - expected).abs() <= 1e-12 * (1.0 + expected.abs()), "y = {y}: {v:?}");
            }
        }
        let v = f.eval_at(x, 0.0);
        let (u, l) = (nf.upper_field().eval([x, 0.0]), nf.lower_field().eval([x, 0.0]));
        assert!((v[0] - (u[0] + l[0]) / 2.0).abs() < 1e-15);
        assert!((v[1] - (u[1] + l[1]) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn box_exit_is_reported() {
        let cfg = SimConfig::default();
        let f = RegularizedField::new(&saddle(), Sigmoid::Arctan, &cfg);
        let err = integrate(&f, &cfg, [0.0, 100.0], &[], 1, false).unwrap_err();
        assert_eq!(err.kind, SimErrorKind::BoxExit);
    }
}
