//! The VI₃ normal form, its validation and normalization from general
//! piecewise-linear data, and the regime classification of the lower field.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type Mat2<T> = [[T; 2]; 2];
pub type Vec2<T> = [T; 2];

/// Parameters of the normal form
///
/// ```text
/// Z⁻(x, y) = (−1 + β₋ y, −x + γ₋ y)              (y < 0)
/// Z⁺(x, y) = (B + α₊ x + β₊ y, δ₊ x + γ₊ y)       (y > 0)
/// ```
///
/// with `B > δ₊ > 0`. Construct through [`NormalForm::new`], which enforces
/// the constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalForm<T> {
    beta_minus: T,
    gamma_minus: T,
    drift: T,
    alpha_plus: T,
    beta_plus: T,
    delta_plus: T,
    gamma_plus: T,
}

impl<T: Real> NormalForm<T> {
    pub fn new(
        beta_minus: T,
        gamma_minus: T,
        drift: T,
        alpha_plus: T,
        beta_plus: T,
        delta_plus: T,
        gamma_plus: T,
    ) -> Result<Self> {
        let all = [beta_minus, gamma_minus, drift, alpha_plus, beta_plus, delta_plus, gamma_plus];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Violation("all coefficients must be finite".into()));
        }
        if !(delta_plus > T::zero()) {
            return Err(Error::Violation(format!("delta_plus = {delta_plus} must be positive")));
        }
        if !(drift > delta_plus) {
            return Err(Error::Violation(format!(
                "B = {drift} must exceed delta_plus = {delta_plus}"
            )));
        }
        Ok(NormalForm {
            beta_minus,
            gamma_minus,
            drift,
            alpha_plus,
            beta_plus,
            delta_plus,
            gamma_plus,
        })
    }

    /// The parameters the slow divergence integral depends on, with
    /// `β₊ = γ₊ = 0`.
    pub fn reduced(beta_minus: T, gamma_minus: T, drift: T, alpha_plus: T, delta_plus: T) -> Result<Self> {
        Self::new(beta_minus, gamma_minus, drift, alpha_plus, T::zero(), delta_plus, T::zero())
    }

    pub fn beta_minus(&self) -> T {
        self.beta_minus
    }
    pub fn gamma_minus(&self) -> T {
        self.gamma_minus
    }
    /// `B`, the x-component of Z⁺ at the origin.
    pub fn drift(&self) -> T {
        self.drift
    }
    pub fn alpha_plus(&self) -> T {
        self.alpha_plus
    }
    pub fn beta_plus(&self) -> T {
        self.beta_plus
    }
    pub fn delta_plus(&self) -> T {
        self.delta_plus
    }
    pub fn gamma_plus(&self) -> T {
        self.gamma_plus
    }

    /// `B − δ₊`, positive by construction.
    pub fn gap(&self) -> T {
        self.drift - self.delta_plus
    }

    /// `V(u) = β₋u² − γ₋u + 1`.
    pub fn v(&self, u: T) -> T {
        (self.beta_minus * u - self.gamma_minus) * u + T::one()
    }

    /// Sliding vector field `(B − δ₊ + α₊x)/(1 + δ₊)` on the switching line.
    pub fn sliding(&self, x: T) -> T {
        (self.gap() + self.alpha_plus * x) / (T::one() + self.delta_plus)
    }

    /// Zero of the sliding field, `−(B − δ₊)/α₊`, when `α₊ ≠ 0`.
    pub fn x_star(&self) -> Option<T> {
        if self.alpha_plus == T::zero() {
            None
        } else {
            Some(-self.gap() / self.alpha_plus)
        }
    }

    /// Image under `(x, α₊, γ₊, γ₋, t) ↦ (−x, −α₊, −γ₊, −γ₋, −t)`.
    pub fn reflect(&self) -> Self {
        NormalForm {
            gamma_minus: -self.gamma_minus,
            alpha_plus: -self.alpha_plus,
            gamma_plus: -self.gamma_plus,
            ..*self
        }
    }

    pub fn with_alpha_plus(&self, alpha_plus: T) -> Self {
        NormalForm { alpha_plus, ..*self }
    }

    pub fn lower_field(&self) -> LinearField<T> {
        LinearField {
            a: [[T::zero(), self.beta_minus], [-T::one(), self.gamma_minus]],
            b: [-T::one(), T::zero()],
        }
    }

    pub fn upper_field(&self) -> LinearField<T> {
        LinearField {
            a: [[self.alpha_plus, self.beta_plus], [self.delta_plus, self.gamma_plus]],
            b: [self.drift, T::zero()],
        }
    }

    pub fn to_f64(&self) -> NormalForm<f64> {
        NormalForm {
            beta_minus: self.beta_minus.as_f64(),
            gamma_minus: self.gamma_minus.as_f64(),
            drift: self.drift.as_f64(),
            alpha_plus: self.alpha_plus.as_f64(),
            beta_plus: self.beta_plus.as_f64(),
            delta_plus: self.delta_plus.as_f64(),
            gamma_plus: self.gamma_plus.as_f64(),
        }
    }

    pub fn classify(&self) -> Regime<T> {
        Regime::of(self)
    }
}

/// Affine field `z ↦ a z + b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearField<T> {
    pub a: Mat2<T>,
    pub b: Vec2<T>,
}

impl<T: Real> LinearField<T> {
    pub fn eval(&self, p: Vec2<T>) -> Vec2<T> {
        [
            self.a[0][0] * p[0] + self.a[0][1] * p[1] + self.b[0],
            self.a[1][0] * p[0] + self.a[1][1] * p[1] + self.b[1],
        ]
    }
}

/// Change of coordinates `z̃ = matrix · z + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineMap<T> {
    pub matrix: Mat2<T>,
    pub offset: Vec2<T>,
}

fn mat_mul<T: Real>(p: Mat2<T>, q: Mat2<T>) -> Mat2<T> {
    let mut r = [[T::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
        }
    }
    r
}

fn mat_vec<T: Real>(m: Mat2<T>, v: Vec2<T>) -> Vec2<T> {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

impl<T: Real> AffineMap<T> {
    pub fn identity() -> Self {
        AffineMap {
            matrix: [[T::one(), T::zero()], [T::zero(), T::one()]],
            offset: [T::zero(); 2],
        }
    }

    pub fn det(&self) -> T {
        let m = self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn inverse_matrix(&self) -> Mat2<T> {
        let m = self.matrix;
        let d = self.det();
        [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
    }

    pub fn apply(&self, p: Vec2<T>) -> Vec2<T> {
        let q = mat_vec(self.matrix, p);
        [q[0] + self.offset[0], q[1] + self.offset[1]]
    }

    /// The field `f` expressed in the new coordinates.
    pub fn push_field(&self, f: &LinearField<T>) -> LinearField<T> {
        let minv = self.inverse_matrix();
        let a = mat_mul(mat_mul(self.matrix, f.a), minv);
        let mb = mat_vec(self.matrix, f.b);
        let ao = mat_vec(a, self.offset);
        LinearField {
            a,
            b: [mb[0] - ao[0], mb[1] - ao[1]],
        }
    }
}

/// Bring a general VI₃ pair `Z⁻ = A⁻z + b⁻`, `Z⁺ = A⁺z + b⁺` (switching
/// line `y = 0`, two-fold at the origin) into normal form. The map is the
/// shear `x ↦ x − (A⁻₁₁/A⁻₂₁)y` followed by the scalings
/// `x ↦ x/|b⁻₁|`, `y ↦ y/(|b⁻₁||A⁻₂₁|)`.
pub fn normalize_general<T: Real>(lower: &LinearField<T>, upper: &LinearField<T>) -> Result<(NormalForm<T>, AffineMap<T>)> {
    let (am, bm, ap, bp) = (lower.a, lower.b, upper.a, upper.b);
    let zero = T::zero();
    let all = [am[0][0], am[0][1], am[1][0], am[1][1], bm[0], bm[1], ap[0][0], ap[0][1], ap[1][0], ap[1][1], bp[0], bp[1]];
    if all.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotVi3("coefficients must be finite"));
    }
    if !(bp[0] > zero) {
        return Err(Error::NotVi3("b⁺₁ > 0 fails"));
    }
    if bp[1] != zero {
        return Err(Error::NotVi3("b⁺₂ = 0 fails"));
    }
    if !(ap[1][0] > zero) {
        return Err(Error::NotVi3("A⁺₂₁ > 0 fails"));
    }
    if !(bm[0] < zero) {
        return Err(Error::NotVi3("b⁻₁ < 0 fails"));
    }
    if bm[1] != zero {
        return Err(Error::NotVi3("b⁻₂ = 0 fails"));
    }
    if !(am[1][0] < zero) {
        return Err(Error::NotVi3("A⁻₂₁ < 0 fails"));
    }
    if !(bm[0] * ap[1][0] - bp[0] * am[1][0] > zero) {
        return Err(Error::NotVi3("b⁻₁A⁺₂₁ − b⁺₁A⁻₂₁ > 0 fails"));
    }

    let shear = am[0][0] / am[1][0];
    let sx = T::one() / bm[0].abs();
    let sy = sx / am[1][0].abs();
    let map = AffineMap {
        matrix: [[sx, -sx * shear], [zero, sy]],
        offset: [zero; 2],
    };
    let up = map.push_field(upper);
    let det = am[0][0] * am[1][1] - am[0][1] * am[1][0];
    let tr = am[0][0] + am[1][1];
    let nf = NormalForm::new(det, tr, up.b[0], up.a[0][0], up.a[0][1], up.a[1][0], up.a[1][1])?;
    Ok((nf, map))
}

/// A value in `[−∞, +∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal<T> {
    NegInf,
    Finite(T),
    PosInf,
}

impl<T: Real> ExtReal<T> {
    pub fn finite(&self) -> Option<T> {
        match *self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// Strict order against a finite value.
    pub fn gt(&self, v: T) -> bool {
        match *self {
            ExtReal::NegInf => false,
            ExtReal::Finite(a) => a > v,
            ExtReal::PosInf => true,
        }
    }

    pub fn lt(&self, v: T) -> bool {
        match *self {
            ExtReal::NegInf => true,
            ExtReal::Finite(a) => a < v,
            ExtReal::PosInf => false,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(v) => v.as_f64(),
            ExtReal::PosInf => f64::INFINITY,
        }
    }
}

impl<T: Real> fmt::Display for ExtReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => f.write_str("inf"),
        }
    }
}

// Infinite values go out as the strings "inf" / "-inf" since JSON has no
// representation for them.
impl<T: Real> Serialize for ExtReal<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::NegInf => s.serialize_str("-inf"),
            ExtReal::Finite(v) => v.serialize(s),
            ExtReal::PosInf => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RegimeKind {
    Saddle,
    NodeDistinct,
    NodeRepeated,
    Focus,
    Center,
    InvariantLine,
    Parabola,
}

impl RegimeKind {
    pub const ALL: [RegimeKind; 7] = [
        RegimeKind::Saddle,
        RegimeKind::NodeDistinct,
        RegimeKind::NodeRepeated,
        RegimeKind::Focus,
        RegimeKind::Center,
        RegimeKind::InvariantLine,
        RegimeKind::Parabola,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RegimeKind::Saddle => "Saddle",
            RegimeKind::NodeDistinct => "NodeDistinct",
            RegimeKind::NodeRepeated => "NodeRepeated",
            RegimeKind::Focus => "Focus",
            RegimeKind::Center => "Center",
            RegimeKind::InvariantLine => "InvariantLine",
            RegimeKind::Parabola => "Parabola",
        }
    }
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Qualitative type of Z⁻ together with the half-map's domain and image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct Regime<T> {
    pub kind: RegimeKind,
    /// Equilibrium of Z⁻, present when `β₋ ≠ 0`.
    pub singularity: Option<Vec2<T>>,
    /// Real eigenvalues `κ₋ ≤ κ₊` of Z⁻.
    pub eigenvalues: Option<(T, T)>,
    pub x_l: Option<T>,
    pub x_r: Option<T>,
    pub pi_domain_end: ExtReal<T>,
    pub pi_image_end: ExtReal<T>,
}

impl<T: Real> Regime<T> {
    fn of(nf: &NormalForm<T>) -> Self {
        let beta = nf.beta_minus;
        let gamma = nf.gamma_minus;
        let zero = T::zero();
        let disc = gamma * gamma - T::lit(4.0) * beta;

        let kind = if beta < zero {
            RegimeKind::Saddle
        } else if beta > zero {
            if gamma == zero {
                RegimeKind::Center
            } else if disc > zero {
                RegimeKind::NodeDistinct
            } else if disc == zero {
                RegimeKind::NodeRepeated
            } else {
                RegimeKind::Focus
            }
        } else if gamma != zero {
            RegimeKind::InvariantLine
        } else {
            RegimeKind::Parabola
        };

        let singularity = (beta != zero).then(|| [gamma / beta, T::one() / beta]);

        let mut eigenvalues = None;
        let mut x_l = None;
        let mut x_r = None;
        if beta != zero && disc >= zero {
            if disc == zero {
                let k = gamma / T::two();
                eigenvalues = Some((k, k));
                let r = T::two() / gamma;
                x_l = Some(r);
                x_r = Some(r);
            } else {
                // κ with the larger magnitude first, the other from κ₊κ₋ = β
                let sgn = if gamma < zero { -T::one() } else { T::one() };
                let k1 = (gamma + sgn * disc.sqrt()) / T::two();
                let k2 = beta / k1;
                let (km, kp) = if k1 < k2 { (k1, k2) } else { (k2, k1) };
                eigenvalues = Some((km, kp));
                let (r1, r2) = (T::one() / k1, T::one() / k2);
                let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
                x_l = Some(lo);
                x_r = Some(hi);
            }
        } else if beta == zero && gamma != zero {
            x_r = Some(T::one() / gamma);
        }

        let roots = [x_l, x_r];
        let pos = roots.iter().flatten().copied().filter(|r| *r > zero).fold(None, |m: Option<T>, r| {
            Some(m.map_or(r, |m| m.min(r)))
        });
        let neg = roots.iter().flatten().copied().filter(|r| *r < zero).fold(None, |m: Option<T>, r| {
            Some(m.map_or(r, |m| m.max(r)))
        });

        Regime {
            kind,
            singularity,
            eigenvalues,
            x_l,
            x_r,
            pi_domain_end: pos.map_or(ExtReal::PosInf, ExtReal::Finite),
            pi_image_end: neg.map_or(ExtReal::NegInf, ExtReal::Finite),
        }
    }

    /// Whether `u` lies in the open interval `(pi_image_end, pi_domain_end)`.
    pub fn contains(&self, u: T) -> bool {
        self.pi_image_end.lt(u) && self.pi_domain_end.gt(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(beta: f64, gamma: f64) -> NormalForm<f64> {
        NormalForm::new(beta, gamma, 2.0, -1.0, 0.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn constraint_checks() {
        assert!(NormalForm::new(-1.0, 1.0, 2.0, -1.0, 0.0, 1.0, 0.0).is_ok());
        assert!(NormalForm::new(0.0, 0.0, 1.0, 0.0, 0.0, 2.0, 0.0).is_err());
        assert!(NormalForm::new(1.0, 0.0, 1.0, 0.0, 0.0, 0.5, 0.0).is_ok());
        assert!(NormalForm::new(1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(NormalForm::new(f64::NAN, 0.0, 2.0, 0.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn v_values() {
        let s = nf(-1.0, 1.0);
        assert_eq!(s.v(0.0), 1.0);
        assert!(s.v(2.0 / (1.0 + 5f64.sqrt())).abs() < 1e-15);
        assert_eq!(nf(1.0, 0.0).v(1.0), 2.0);
    }

    #[test]
    fn saddle_roots() {
        let r = nf(-1.0, 1.0).classify();
        assert_eq!(r.kind, RegimeKind::Saddle);
        assert!((r.x_l.unwrap() + 1.618_033_988_749_895).abs() < 1e-14);
        assert!((r.x_r.unwrap() - 0.618_033_988_749_895).abs() < 1e-14);
        assert_eq!(r.pi_domain_end, ExtReal::Finite(r.x_r.unwrap()));
        assert_eq!(r.pi_image_end, ExtReal::Finite(r.x_l.unwrap()));
    }

    #[test]
    fn center_and_repeated() {
        let c = nf(1.0, 0.0).classify();
        assert_eq!(c.kind, RegimeKind::Center);
        assert_eq!(c.singularity, Some([0.0, 1.0]));
        assert_eq!(c.pi_domain_end, ExtReal::PosInf);
        assert_eq!(c.pi_image_end, ExtReal::NegInf);

        let n = nf(1.0, 2.0).classify();
        assert_eq!(n.kind, RegimeKind::NodeRepeated);
        assert_eq!(n.singularity, Some([2.0, 1.0]));
        assert_eq!(n.eigenvalues, Some((1.0, 1.0)));
        assert_eq!(n.x_r, Some(1.0));
    }

    #[test]
    fn remaining_kinds() {
        assert_eq!(nf(2.0, 3.0).classify().kind, RegimeKind::NodeDistinct);
        assert_eq!(nf(1.0, 1.0).classify().kind, RegimeKind::Focus);
        let il = nf(0.0, 1.0).classify();
        assert_eq!(il.kind, RegimeKind::InvariantLine);
        assert_eq!(il.x_r, Some(1.0));
        assert_eq!(il.pi_image_end, ExtReal::NegInf);
        assert_eq!(nf(0.0, 0.0).classify().kind, RegimeKind::Parabola);
        let neg = nf(0.0, -2.0).classify();
        assert_eq!(neg.pi_image_end, ExtReal::Finite(-0.5));
        assert_eq!(neg.pi_domain_end, ExtReal::PosInf);
    }

    #[test]
    fn sliding_and_x_star() {
        let a = NormalForm::new(-1.0, 1.0, 2.0, 0.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(a.sliding(123.0), 0.5);
        assert_eq!(a.x_star(), None);
        let b = a.with_alpha_plus(-1.0);
        assert_eq!(b.sliding(1.0), 0.0);
        assert_eq!(b.x_star(), Some(1.0));
        assert_eq!(a.with_alpha_plus(-2.0).sliding(0.0), 0.5);
        let c = NormalForm::new(-1.0, 1.0, 3.0, 4.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(c.x_star(), Some(-0.5));
    }

    #[test]
    fn reflect_is_involution() {
        let a = NormalForm::new(-1.0, 1.0, 2.0, -1.0, 0.0, 1.0, 0.0).unwrap();
        let r = a.reflect();
        assert_eq!(r, NormalForm::new(-1.0, -1.0, 2.0, 1.0, 0.0, 1.0, 0.0).unwrap());
        assert_eq!(r.reflect(), a);
        let s = NormalForm::new(1.0, 0.0, 2.0, 0.0, 0.3, 1.0, 0.0).unwrap();
        assert_eq!(s.reflect(), s);
    }

    #[test]
    fn normalization_of_normal_form_is_identity() {
        let nf = NormalForm::new(-1.5, 0.7, 3.0, -0.4, 0.2, 1.1, 0.3).unwrap();
        let (out, map) = normalize_general(&nf.lower_field(), &nf.upper_field()).unwrap();
        assert_eq!(out, nf);
        assert_eq!(map, AffineMap::identity());
    }

    #[test]
    fn normalization_general_example() {
        let lower: LinearField<f64> = LinearField { a: [[0.0, -2.0], [-3.0, 3.0]], b: [-2.0, 0.0] };
        let upper = LinearField { a: [[0.5, 1.0], [1.0, -0.2]], b: [4.0, 0.0] };
        let (nf, map) = normalize_general(&lower, &upper).unwrap();
        assert_eq!(nf.beta_minus(), -6.0);
        assert_eq!(nf.gamma_minus(), 3.0);
        let lo = map.push_field(&lower);
        let want = nf.lower_field();
        for i in 0..2 {
            assert!((lo.b[i] - want.b[i]).abs() < 1e-12);
            for j in 0..2 {
                assert!((lo.a[i][j] - want.a[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn normalization_rejects_visible_fold_data() {
        let lower = LinearField { a: [[0.0, -1.0], [-1.0, 1.0]], b: [-1.0, 0.0] };
        let upper = LinearField { a: [[0.0, 0.0], [1.0, 0.0]], b: [2.0, 0.1] };
        assert_eq!(normalize_general(&lower, &upper), Err(Error::NotVi3("b⁺₂ = 0 fails")));
    }
}
