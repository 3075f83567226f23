//! Poincaré half-map of the lower field from `{x > 0, y = 0}` to
//! `{x < 0, y = 0}`.
//!
//! `Π(x)` is the non-positive solution of `F(Π(x)) = F(x)`, where `F` is the
//! antiderivative of `−u/V(u)` vanishing at 0. `F` has a strict maximum at 0
//! and is monotone on each side, so the equation is solved by bracketing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ExtReal, NormalForm, Regime, RegimeKind};
use crate::numerics::ode::{Integrator, OdeOptions, State};
use crate::numerics::root::{brent_with_values, Tolerance};
use crate::scalar::{log1p_minus_id, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HalfMapMethod {
    ClosedFormRoot,
    OdeShooting,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfMapEval<T> {
    pub x: T,
    pub pi_x: T,
    pub pi_prime: T,
    /// `|F(x) − F(Π(x))|` at the returned point.
    pub residual: T,
    pub method: HalfMapMethod,
}

/// Distance from a finite domain or image end below which evaluation is
/// refused.
pub const BOUNDARY_GUARD: f64 = 1e-9;
/// Bracket growth stops this far short of a finite image end.
const BRACKET_MARGIN: f64 = 1e-12;

/// Half-map of one normal form with the regime data cached.
#[derive(Debug, Clone, Copy)]
pub struct HalfMap<T> {
    nf: NormalForm<T>,
    regime: Regime<T>,
    /// Bound on the largest `|κ|`; the Taylor series of `F` at 0 converges for
    /// `|u| < 1/series_scale`.
    series_scale: T,
}

impl<T: Real> HalfMap<T> {
    pub fn new(nf: &NormalForm<T>) -> Self {
        let series_scale = nf.gamma_minus().abs() + nf.beta_minus().abs().sqrt();
        HalfMap {
            nf: *nf,
            regime: nf.classify(),
            series_scale,
        }
    }

    pub fn normal_form(&self) -> &NormalForm<T> {
        &self.nf
    }

    pub fn regime(&self) -> &Regime<T> {
        &self.regime
    }

    /// Antiderivative of `−u/V(u)` with `F(0) = 0`, on the interval around 0
    /// where `V > 0`.
    pub fn antiderivative(&self, u: T) -> Result<T> {
        if !self.regime.contains(u) {
            return Err(Error::OutOfBranch {
                u: u.as_f64(),
                lo: self.regime.pi_image_end.to_f64(),
                hi: self.regime.pi_domain_end.to_f64(),
            });
        }
        Ok(self.antiderivative_unchecked(u))
    }

    fn antiderivative_unchecked(&self, u: T) -> T {
        if u == T::zero() {
            return T::zero();
        }
        if u.abs() * self.series_scale <= T::lit(0.1) {
            return self.antiderivative_series(u);
        }
        let beta = self.nf.beta_minus();
        let gamma = self.nf.gamma_minus();
        let r = &self.regime;
        match r.kind {
            RegimeKind::Parabola => -u * u / T::two(),
            RegimeKind::InvariantLine => log1p_minus_id(-gamma * u) / (gamma * gamma),
            RegimeKind::Saddle | RegimeKind::NodeDistinct => {
                let (r1, r2) = (r.x_l.unwrap(), r.x_r.unwrap());
                let a = T::one() / (beta * (r2 - r1));
                if u.abs() < T::half() * r1.abs().min(r2.abs()) {
                    // the linear parts of the two logarithms cancel; drop them
                    a * (r1 * log1p_minus_id(-u / r1) - r2 * log1p_minus_id(-u / r2))
                } else {
                    a * (r1 * (-u / r1).ln_1p() - r2 * (-u / r2).ln_1p())
                }
            }
            RegimeKind::NodeRepeated => {
                let root = r.x_r.unwrap();
                let t = u / root;
                let inner = if t.abs() < T::one() {
                    log1p_minus_id(-t) + t * (t / (T::one() - t))
                } else {
                    (-t).ln_1p() + t / (T::one() - t)
                };
                -root * root * inner
            }
            RegimeKind::Focus | RegimeKind::Center => {
                let p = gamma / (T::two() * beta);
                let q = (T::lit(4.0) * beta - gamma * gamma).sqrt() / (T::two() * beta);
                // V − 1 written out so that ln V keeps its precision near 0
                let log_v = (u * (beta * u - gamma)).ln_1p();
                // atan((u−p)/q) − atan(−p/q) as a single atan2, using p² + q² = 1/β
                let angle = (u * q).atan2(T::one() / beta - u * p);
                -(log_v / (T::two() * beta) + p / (beta * q) * angle)
            }
        }
    }

    /// `−Σ a_k u^{k+2}/(k+2)` with `1/V(u) = Σ a_k u^k`.
    fn antiderivative_series(&self, u: T) -> T {
        let beta = self.nf.beta_minus();
        let gamma = self.nf.gamma_minus();
        let (mut a_prev, mut a) = (T::zero(), T::one());
        let mut pow = u * u;
        let mut sum = T::zero();
        let mut prev_small = false;
        for k in 0..200 {
            let term = a * pow / T::from_usize(k + 2).unwrap();
            sum = sum + term;
            // single coefficients can vanish (a₂ = 0 when γ₋² = β₋), so wait
            // for two negligible terms in a row
            let small = term.abs() <= T::epsilon() * T::lit(0.25) * sum.abs();
            if small && prev_small {
                break;
            }
            prev_small = small;
            let next = gamma * a - beta * a_prev;
            a_prev = a;
            a = next;
            pow = pow * u;
        }
        -sum
    }

    fn check_domain(&self, x: T) -> Result<()> {
        let bad = x < T::zero()
            || !x.is_finite()
            || match self.regime.pi_domain_end {
                ExtReal::Finite(end) => x >= end - T::lit(BOUNDARY_GUARD),
                _ => false,
            };
        if bad {
            return Err(Error::DomainExceeded {
                x: x.as_f64(),
                end: self.regime.pi_domain_end.to_f64(),
            });
        }
        Ok(())
    }

    fn check_image(&self, y: T) -> Result<()> {
        let bad = y > T::zero()
            || !y.is_finite()
            || match self.regime.pi_image_end {
                ExtReal::Finite(end) => y <= end + T::lit(BOUNDARY_GUARD),
                _ => false,
            };
        if bad {
            return Err(Error::ImageExceeded {
                y: y.as_f64(),
                end: self.regime.pi_image_end.to_f64(),
            });
        }
        Ok(())
    }

    /// Solve `F(s) = target` for `s` on the side of 0 given by `dir` (±1),
    /// starting the bracket at `s = dir·start` and doubling toward `end`.
    fn solve_side(&self, target: T, start: T, dir: T, end: ExtReal<T>, origin: T) -> Result<T> {
        let g = |s: T| self.antiderivative_unchecked(s) - target;
        let limit = end.finite().map(|e| e - dir * T::lit(BRACKET_MARGIN));
        let zero = T::zero();
        // g(0) = −target > 0
        let mut inner = zero;
        let mut g_inner = -target;
        let mut s = dir * start;
        if let Some(l) = limit {
            if dir * s > dir * l {
                s = l;
            }
        }
        for _ in 0..4096 {
            let gs = g(s);
            if !gs.is_finite() {
                break;
            }
            if gs == zero {
                return Ok(s);
            }
            if gs < zero {
                let root = brent_with_values(g, inner, g_inner, s, gs, Tolerance::default())?;
                return Ok(root);
            }
            if limit == Some(s) {
                break;
            }
            inner = s;
            g_inner = gs;
            s = s * T::two();
            if let Some(l) = limit {
                if dir * s > dir * l {
                    s = l;
                }
            }
            if !s.is_finite() {
                break;
            }
        }
        Err(Error::BracketFailure { x: origin.as_f64() })
    }

    /// `Π(x)` for `0 ≤ x < pi_domain_end`.
    pub fn pi(&self, x: T) -> Result<T> {
        self.check_domain(x)?;
        if x == T::zero() {
            return Ok(T::zero());
        }
        let fx = self.antiderivative_unchecked(x);
        self.solve_side(fx, x, -T::one(), self.regime.pi_image_end, x)
    }

    /// `Π⁻¹(y)` for `pi_image_end < y ≤ 0`.
    pub fn inverse(&self, y: T) -> Result<T> {
        self.check_image(y)?;
        if y == T::zero() {
            return Ok(T::zero());
        }
        let fy = self.antiderivative_unchecked(y);
        self.solve_side(fy, -y, T::one(), self.regime.pi_domain_end, y)
    }

    /// `Π′(x) = x V(Π(x)) / (Π(x) V(x))`, with the limit `−1` at 0.
    pub fn derivative(&self, x: T) -> Result<T> {
        let y = self.pi(x)?;
        Ok(self.derivative_at(x, y))
    }

    pub fn derivative_at(&self, x: T, pi_x: T) -> T {
        if x == T::zero() {
            return -T::one();
        }
        x * self.nf.v(pi_x) / (pi_x * self.nf.v(x))
    }

    pub fn eval(&self, x: T) -> Result<HalfMapEval<T>> {
        let pi_x = self.pi(x)?;
        let residual = (self.antiderivative_unchecked(x) - self.antiderivative_unchecked(pi_x)).abs();
        Ok(HalfMapEval {
            x,
            pi_x,
            pi_prime: self.derivative_at(x, pi_x),
            residual,
            method: HalfMapMethod::ClosedFormRoot,
        })
    }
}

pub fn antiderivative<T: Real>(nf: &NormalForm<T>, u: T) -> Result<T> {
    HalfMap::new(nf).antiderivative(u)
}

pub fn half_map<T: Real>(nf: &NormalForm<T>, x: T) -> Result<HalfMapEval<T>> {
    HalfMap::new(nf).eval(x)
}

pub fn half_map_inverse<T: Real>(nf: &NormalForm<T>, y: T) -> Result<T> {
    HalfMap::new(nf).inverse(y)
}

pub fn half_map_derivative<T: Real>(nf: &NormalForm<T>, x: T) -> Result<T> {
    HalfMap::new(nf).derivative(x)
}

/// Settings for the shooting oracle.
#[derive(Debug, Clone, Copy)]
pub struct ShootingOptions<T> {
    pub ode: OdeOptions<T>,
    /// Trajectories leaving `[−bound, bound]²` count as not returning.
    pub bound: T,
    pub max_time: T,
}

impl<T: Real> Default for ShootingOptions<T> {
    fn default() -> Self {
        // tighter than the integrator default: the oracle has to out-resolve
        // the closed form where Π(x) is large
        ShootingOptions {
            ode: OdeOptions {
                rtol: T::lit(1e-13),
                atol: T::lit(1e-15),
                ..OdeOptions::default()
            },
            bound: T::lit(1e8),
            max_time: T::lit(1e4),
        }
    }
}

/// `Π(x)` by integrating the lower field from `(x, 0)` until it crosses
/// `y = 0` upward at negative `x`. Independent of the closed form.
pub fn half_map_ode_oracle<T: Real>(nf: &NormalForm<T>, x: T, opts: &ShootingOptions<T>) -> Result<HalfMapEval<T>> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::DomainExceeded {
            x: x.as_f64(),
            end: nf.classify().pi_domain_end.to_f64(),
        });
    }
    let lower = nf.lower_field();
    let field = move |p: State<T>| lower.eval(p);
    let mut it = Integrator::new(&field, [x, T::zero()], opts.ode);
    let fail = Error::NoReturn { x: x.as_f64() };
    while it.t < opts.max_time {
        let step = it.advance().map_err(|_| fail.clone())?;
        if step.y1[0].abs() > opts.bound || step.y1[1].abs() > opts.bound {
            return Err(fail);
        }
        if step.y0[1] < T::zero() && step.y1[1] >= T::zero() {
            let (_, p) = it.locate(&step, |p| p[1], T::zero());
            if p[0] < T::zero() {
                let hm = HalfMap::new(nf);
                let residual = (hm.antiderivative_unchecked(x) - hm.antiderivative_unchecked(p[0])).abs();
                return Ok(HalfMapEval {
                    x,
                    pi_x: p[0],
                    pi_prime: hm.derivative_at(x, p[0]),
                    residual,
                    method: HalfMapMethod::OdeShooting,
                });
            }
        }
    }
    Err(fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(beta: f64, gamma: f64) -> NormalForm<f64> {
        NormalForm::reduced(beta, gamma, 2.0, -1.0, 1.0).unwrap()
    }

    #[test]
    fn antiderivative_values() {
        assert_eq!(antiderivative(&nf(0.0, 0.0), 2.0).unwrap(), -2.0);
        assert_eq!(antiderivative(&nf(-1.0, 1.0), 0.0).unwrap(), 0.0);
        let v = antiderivative(&nf(1.0, 0.0), 1.0).unwrap();
        assert!((v + 2f64.ln() / 2.0).abs() < 1e-15);
        assert!(matches!(
            antiderivative(&nf(-1.0, 1.0), 0.7),
            Err(Error::OutOfBranch { .. })
        ));
    }

    #[test]
    fn series_and_closed_form_agree_at_switch() {
        for (b, g) in [(-1.0, 1.0), (2.0, 3.0), (1.0, 2.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)] {
            let hm = HalfMap::new(&nf(b, g));
            let u0 = 0.1 / hm.series_scale;
            for u in [u0 * (1.0 - 1e-9), -u0 * (1.0 - 1e-9)] {
                let s = hm.antiderivative_series(u);
                let mut closed = hm;
                closed.series_scale = f64::INFINITY;
                let c = closed.antiderivative_unchecked(u);
                assert!((s - c).abs() <= 1e-14 * s.abs(), "{b} {g} {u}: {s} vs {c}");
            }
        }
    }

    #[test]
    fn symmetric_case_is_reflection() {
        let hm = HalfMap::new(&nf(1.0, 0.0));
        assert_eq!(hm.pi(0.3).unwrap(), -0.3);
        assert_eq!(hm.inverse(-0.7).unwrap(), 0.7);
        assert_eq!(hm.pi(0.0).unwrap(), 0.0);
        assert_eq!(hm.derivative(0.4).unwrap(), -1.0);
        assert_eq!(hm.derivative(0.0).unwrap(), -1.0);
    }

    #[test]
    fn saddle_domain_guard() {
        let hm = HalfMap::new(&nf(-1.0, 1.0));
        let xr = hm.regime().x_r.unwrap();
        assert!(matches!(hm.pi(xr), Err(Error::DomainExceeded { .. })));
        assert!(matches!(hm.pi(xr - 1e-10), Err(Error::DomainExceeded { .. })));
        assert!(hm.pi(xr - 1e-6).is_ok());
        assert!(matches!(hm.inverse(0.1), Err(Error::ImageExceeded { .. })));
    }

    #[test]
    fn oracle_symmetric_cases() {
        let o = ShootingOptions::default();
        let c = half_map_ode_oracle(&nf(1.0, 0.0), 1.0, &o).unwrap();
        assert!((c.pi_x + 1.0).abs() < 1e-9);
        let p = half_map_ode_oracle(&nf(0.0, 0.0), 0.8, &o).unwrap();
        assert!((p.pi_x + 0.8).abs() < 1e-9);
    }

    #[test]
    fn oracle_reports_escape() {
        let hm = nf(-1.0, 1.0);
        let r = half_map_ode_oracle(&hm, 0.7, &ShootingOptions::default());
        assert!(matches!(r, Err(Error::NoReturn { .. })));
    }
}
