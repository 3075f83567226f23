//! One representative parameter point per catalog case.
//!
//! All points use `B = 2`, `δ₊ = 1` (so `B − δ₊ = 1` and `x* = −1/α₊`) and
//! `β₊ = γ₊ = 0`. Boundary cases are constructed so that the defining
//! equality holds exactly in floating point.

use crate::model::NormalForm;

#[derive(Debug, Clone, Copy)]
pub struct GoldenCase {
    pub id: &'static str,
    pub beta_minus: f64,
    pub gamma_minus: f64,
    pub alpha_plus: f64,
}

impl GoldenCase {
    pub fn normal_form(&self) -> NormalForm<f64> {
        NormalForm::reduced(self.beta_minus, self.gamma_minus, 2.0, self.alpha_plus, 1.0)
            .expect("golden parameters are admissible")
    }
}

const fn g(id: &'static str, beta_minus: f64, gamma_minus: f64, alpha_plus: f64) -> GoldenCase {
    GoldenCase { id, beta_minus, gamma_minus, alpha_plus }
}

/// Saddle point with `x* = 0.95`, between `x_R ≈ 0.618` and `1/γ₋ = 1`,
/// where the SDI has one simple zero.
pub const SADDLE_TWO_CYCLE: GoldenCase = g("saddle.3", -1.0, 1.0, -20.0 / 19.0);

pub const GOLDEN: &[GoldenCase] = &[
    g("degenerate", -1.0, 0.0, 0.0),
    g("mainpart1.2.pos", -1.0, 0.0, 1.0),
    g("mainpart1.2.neg", -1.0, 0.0, -1.0),
    // x_L = −(1+√5)/2, x_R = (√5−1)/2, 1/γ₋ = 1
    g("saddle.1", -1.0, 1.0, -0.5),
    g("saddle.2", -1.0, 1.0, -1.0),
    SADDLE_TWO_CYCLE,
    // β₋ = −2, γ₋ = 1: x_L = −1, x_R = 1/2 exactly
    g("saddle.4", -2.0, 1.0, -2.0),
    g("saddle.5", -1.0, 1.0, -1.0 / 0.3),
    g("saddle.6", -1.0, 1.0, 1.0),
    g("saddle.7", -2.0, 1.0, 1.0),
    g("saddle.8", -1.0, 1.0, 1.0 / 3.0),
    g("saddle.9", -1.0, 1.0, 0.0),
    // x_L = 1/2, x_R = 1, 1/γ₋ = 1/3
    g("node-distinct.1", 2.0, 3.0, -0.5),
    g("node-distinct.2", 2.0, 3.0, -1.0),
    g("node-distinct.3", 2.0, 3.0, -4.0 / 3.0),
    g("node-distinct.4", 2.0, 3.0, -2.0),
    g("node-distinct.5", 2.0, 3.0, -2.5),
    g("node-distinct.6", 2.0, 3.0, -3.0),
    g("node-distinct.7", 2.0, 3.0, -4.0),
    g("node-distinct.8", 2.0, 3.0, 1.0),
    g("node-distinct.9", 2.0, 3.0, 0.0),
    // x_R = 2/γ₋ = 1, 1/γ₋ = 1/2
    g("node-repeated.1", 1.0, 2.0, -0.5),
    g("node-repeated.2", 1.0, 2.0, -1.0),
    // x* = 0.6; for x* ≳ 0.7 the zero sits within 10⁻³·x* of x*
    g("node-repeated.3", 1.0, 2.0, -5.0 / 3.0),
    g("node-repeated.4", 1.0, 2.0, -2.0),
    g("node-repeated.5", 1.0, 2.0, -4.0),
    g("node-repeated.6", 1.0, 2.0, 1.0),
    g("node-repeated.7", 1.0, 2.0, 0.0),
    // 1/γ₋ = 1
    g("focus.1", 1.0, 1.0, -2.0 / 3.0),
    g("focus.2", 1.0, 1.0, -1.0),
    g("focus.3", 1.0, 1.0, -2.0),
    g("focus.4", 1.0, 1.0, 1.0),
    g("focus.5", 1.0, 1.0, 0.0),
    g("appendixA.a", 1.0, 0.0, -1.0),
    g("appendixA.b", 1.0, 0.0, 0.0),
    g("appendixA.c", 1.0, 0.0, 4.0),
    g("appendixB.a", 0.0, 1.0, -0.5),
    g("appendixB.a0", 0.0, 1.0, -1.0),
    g("appendixB.b", 0.0, 1.0, -2.0),
    g("appendixB.c", 0.0, 1.0, 0.0),
    g("appendixB.d", 0.0, 1.0, 1.0),
    g("appendixB.e", 0.0, 0.0, -1.0),
    g("appendixB.f", 0.0, 0.0, 0.0),
    g("appendixB.g", 0.0, 0.0, 1.0),
];
