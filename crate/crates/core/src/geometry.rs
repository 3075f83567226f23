//! Geometry of the curve `Δ̄(x, y) = 0` relative to the auxiliary cubic
//! system `ẋ = yV(x), ẏ = xV(y)`, whose stable manifold at the origin
//! (restricted to `x ≥ 0`) is the graph of the half-map.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::NormalForm;
use crate::scalar::Real;
use crate::sdi::delta_bar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    /// The lines `x = x*` and `y = x*` (`α₊β₋ ≠ 0`, `V(x*) = 0`).
    TwoLines,
    /// `α₊β₋ ≠ 0`, `V(x*) ≠ 0`; parameterized by the involution `hp`.
    Hyperbola,
    /// `α₊ = 0`, `β₋ ≠ 0`: the line `x + y = γ₋/β₋`.
    Line,
    /// `β₋ = 0`.
    Degenerate,
}

pub fn curve_kind<T: Real>(nf: &NormalForm<T>) -> CurveKind {
    let zero = T::zero();
    let (a, b) = (nf.alpha_plus(), nf.beta_minus());
    match nf.x_star() {
        Some(xs) if b != zero => {
            if nf.v(xs) == zero {
                CurveKind::TwoLines
            } else {
                CurveKind::Hyperbola
            }
        }
        _ if a == zero && b != zero => CurveKind::Line,
        _ => CurveKind::Degenerate,
    }
}

/// Distance to `x*` below which `hp` is not evaluated.
pub const ASYMPTOTE_GUARD: f64 = 1e-12;

/// The `y` with `Δ̄(x, y) = 0` on the hyperbola:
/// `(α₊ + γ₋(B−δ₊) − β₋(B−δ₊)x) / (β₋(B − δ₊ + α₊x))`.
pub fn hyperbola_hp<T: Real>(nf: &NormalForm<T>, x: T) -> Result<T> {
    if let Some(xs) = nf.x_star() {
        if (x - xs).abs() < T::lit(ASYMPTOTE_GUARD) {
            return Err(Error::AtAsymptote { x: x.as_f64() });
        }
    }
    let (a, b, g, c) = (nf.alpha_plus(), nf.beta_minus(), nf.gamma_minus(), nf.gap());
    Ok((a + g * c - b * c * x) / (b * (c + a * x)))
}

/// `hp′(x) = −α₊²V(x*) / (β₋(1+δ₊)² X^{sl}(x)²)`.
pub fn hyperbola_hp_derivative<T: Real>(nf: &NormalForm<T>, x: T) -> Option<T> {
    let xs = nf.x_star()?;
    let a = nf.alpha_plus();
    let d = T::one() + nf.delta_plus();
    let s = nf.sliding(x);
    Some(-a * a * nf.v(xs) / (nf.beta_minus() * d * d * s * s))
}

/// `(yV(x), xV(y))`.
pub fn cubic_field<T: Real>(nf: &NormalForm<T>, x: T, y: T) -> (T, T) {
    (y * nf.v(x), x * nf.v(y))
}

/// Residuals of the contact system at `(x, y)`: the derivative of `Δ̄`
/// along the cubic field, and `Δ̄` itself.
pub fn contact_residuals<T: Real>(nf: &NormalForm<T>, x: T, y: T) -> (T, T) {
    let (a, b, c) = (nf.alpha_plus(), nf.beta_minus(), nf.gap());
    let grad = (a * b * y + b * c, a * b * x + b * c);
    let f = cubic_field(nf, x, y);
    (grad.0 * f.0 + grad.1 * f.1, delta_bar(nf, x, y))
}

/// Factored tangency condition `(1+δ₊)β₋(xV(y)X^{sl}(x) + yV(x)X^{sl}(y))`.
pub fn contact_gradient<T: Real>(nf: &NormalForm<T>, x: T, y: T) -> T {
    (T::one() + nf.delta_plus())
        * nf.beta_minus()
        * (x * nf.v(y) * nf.sliding(x) + y * nf.v(x) * nf.sliding(y))
}

/// `√((γ₋x* − 1)/β₋)` when `α₊β₋ ≠ 0` and the radicand is non-negative.
pub fn contact_abscissa<T: Real>(nf: &NormalForm<T>) -> Option<T> {
    let xs = nf.x_star()?;
    let b = nf.beta_minus();
    if b == T::zero() {
        return None;
    }
    let rad = (nf.gamma_minus() * xs - T::one()) / b;
    (rad >= T::zero()).then(|| rad.sqrt())
}

/// Tangency points of `Δ̄ = 0` with the cubic field, for the hyperbola and
/// line cases. Empty for the other curve kinds.
pub fn contact_points<T: Real>(nf: &NormalForm<T>) -> Vec<(T, T)> {
    let kind = curve_kind(nf);
    if !matches!(kind, CurveKind::Hyperbola | CurveKind::Line) {
        return Vec::new();
    }
    let r = nf.classify();
    let mut pts = Vec::new();
    if let (Some(l), Some(rr)) = (r.x_l, r.x_r) {
        if nf.beta_minus() != T::zero() {
            pts.push((l, rr));
            if l != rr {
                pts.push((rr, l));
            }
        }
    }
    if kind == CurveKind::Hyperbola {
        if let Some(xc) = contact_abscissa(nf) {
            pts.push((xc, -xc));
            if xc != T::zero() {
                pts.push((-xc, xc));
            }
        }
    }
    pts
}
