//! Decision table mapping normal-form parameters to the predicted sign or
//! zero count of the slow divergence integral, plus the cross-check against
//! the numeric zero search.

use serde::Serialize;

use crate::model::{NormalForm, RegimeKind};
use crate::regularization::Regularization;
use crate::scalar::Real;
use crate::sdi::{find_sdi_zeros, sdi_domain, is_identically_zero, Multiplicity, SdiDomain, SdiReport, SignProfile, ZeroSearch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Claim {
    INegative,
    IPositive,
    AtMostOneZero,
    ExactlyOneZero,
    IdenticallyZero,
}

impl Claim {
    /// Claim for the reflected system: `I(x) = −I_refl(−Π(x))` swaps the sign.
    fn reflected(self) -> Self {
        match self {
            Claim::INegative => Claim::IPositive,
            Claim::IPositive => Claim::INegative,
            other => other,
        }
    }

    pub fn cyclicity_bound(self) -> Option<u8> {
        match self {
            Claim::INegative | Claim::IPositive => Some(1),
            Claim::AtMostOneZero | Claim::ExactlyOneZero => Some(2),
            Claim::IdenticallyZero => None,
        }
    }

    pub fn cycle_stability(self) -> Option<CycleStability> {
        match self {
            Claim::INegative => Some(CycleStability::Attracting),
            Claim::IPositive => Some(CycleStability::Repelling),
            Claim::AtMostOneZero | Claim::ExactlyOneZero => Some(CycleStability::Pair),
            Claim::IdenticallyZero => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CycleStability {
    Attracting,
    Repelling,
    /// One attracting and one repelling cycle.
    Pair,
}

/// One row of the case catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseSpec {
    pub id: &'static str,
    pub predicate: &'static str,
    pub claim: Claim,
}

macro_rules! case {
    ($id:literal, $pred:literal, $claim:ident) => {
        CaseSpec { id: $id, predicate: $pred, claim: Claim::$claim }
    };
}

/// Every case for `γ₋ ≥ 0`. Parameters with `γ₋ < 0` are reduced to these
/// by reflection.
pub const CATALOG: &[CaseSpec] = &[
    case!("degenerate", "β₋ < 0, α₊ = 0, γ₋ = 0", IdenticallyZero),
    case!("mainpart1.2.pos", "β₋ < 0, γ₋ = 0, α₊ > 0", INegative),
    case!("mainpart1.2.neg", "β₋ < 0, γ₋ = 0, α₊ < 0", IPositive),
    case!("saddle.1", "β₋ < 0, γ₋ > 0, α₊ < 0, 1/γ₋ < x*", INegative),
    case!("saddle.2", "β₋ < 0, γ₋ > 0, α₊ < 0, x* = 1/γ₋", INegative),
    case!("saddle.3", "β₋ < 0, γ₋ > 0, α₊ < 0, x_R < x* < 1/γ₋", AtMostOneZero),
    case!("saddle.4", "β₋ < 0, γ₋ > 0, α₊ < 0, x* = x_R", IPositive),
    case!("saddle.5", "β₋ < 0, γ₋ > 0, α₊ < 0, 0 < x* < x_R", IPositive),
    case!("saddle.6", "β₋ < 0, γ₋ > 0, α₊ > 0, x_L < x* < 0", INegative),
    case!("saddle.7", "β₋ < 0, γ₋ > 0, α₊ > 0, x* = x_L", INegative),
    case!("saddle.8", "β₋ < 0, γ₋ > 0, α₊ > 0, x* < x_L", INegative),
    case!("saddle.9", "β₋ < 0, γ₋ > 0, α₊ = 0", INegative),
    case!("node-distinct.1", "γ₋² > 4β₋ > 0, γ₋ > 0, α₊ < 0, x_R < x*", INegative),
    case!("node-distinct.2", "γ₋² > 4β₋ > 0, γ₋ > 0, α₊ < 0, x* = x_R", INegative),
    case!("node-distinct.3", "γ₋² > 4β₋ > 0, γ₋ > 0, α₊ < 0, x_L < x* < x_R", INegative),
    case!("node-distinct.4", "γ₋² > 4β₋ > 0, γ₋ > 0, α₊ < 0, x* = x_L", INegative),
    case!("node-distinct.5", "γ₋² > 4β₋ > 0, γ₋ > 0, α₊ < 0, 1/γ₋ < x* < x_L", ExactlyOneZero),
    case!("node-distinct.6", "γ₋² > 4β₋ > 0, γ₋ > 0, α₊ < 0, x* = 1/γ₋", IPositive),
    case!("node-distinct.7", "γ₋² > 4β₋ > 0, γ₋ > 0, α₊ < 0, 0 < x* < 1/γ₋", IPositive),
    case!("node-distinct.8", "γ₋² > 4β₋ > 0, γ₋ > 0, α₊ > 0", INegative),
    case!("node-distinct.9", "γ₋² > 4β₋ > 0, γ₋ > 0, α₊ = 0", INegative),
    case!("node-repeated.1", "γ₋² = 4β₋ > 0, γ₋ > 0, α₊ < 0, 2/γ₋ < x*", INegative),
    case!("node-repeated.2", "γ₋² = 4β₋ > 0, γ₋ > 0, α₊ < 0, x* = 2/γ₋", INegative),
    case!("node-repeated.3", "γ₋² = 4β₋ > 0, γ₋ > 0, α₊ < 0, 1/γ₋ < x* < 2/γ₋", ExactlyOneZero),
    case!("node-repeated.4", "γ₋² = 4β₋ > 0, γ₋ > 0, α₊ < 0, x* = 1/γ₋", IPositive),
    case!("node-repeated.5", "γ₋² = 4β₋ > 0, γ₋ > 0, α₊ < 0, 0 < x* < 1/γ₋", IPositive),
    case!("node-repeated.6", "γ₋² = 4β₋ > 0, γ₋ > 0, α₊ > 0", INegative),
    case!("node-repeated.7", "γ₋² = 4β₋ > 0, γ₋ > 0, α₊ = 0", INegative),
    case!("focus.1", "0 < γ₋² < 4β₋, γ₋ > 0, α₊ < 0, 1/γ₋ < x*", ExactlyOneZero),
    case!("focus.2", "0 < γ₋² < 4β₋, γ₋ > 0, α₊ < 0, x* = 1/γ₋", IPositive),
    case!("focus.3", "0 < γ₋² < 4β₋, γ₋ > 0, α₊ < 0, 0 < x* < 1/γ₋", IPositive),
    case!("focus.4", "0 < γ₋² < 4β₋, γ₋ > 0, α₊ > 0", INegative),
    case!("focus.5", "0 < γ₋² < 4β₋, γ₋ > 0, α₊ = 0", INegative),
    case!("appendixA.a", "β₋ > 0, γ₋ = 0, α₊ < 0", IPositive),
    case!("appendixA.b", "β₋ > 0, γ₋ = 0, α₊ = 0", IdenticallyZero),
    case!("appendixA.c", "β₋ > 0, γ₋ = 0, α₊ > 0", INegative),
    case!("appendixB.a", "β₋ = 0, γ₋ > 0, α₊ < 0, 1/γ₋ < x*", INegative),
    case!("appendixB.a0", "β₋ = 0, γ₋ > 0, α₊ < 0, x* = 1/γ₋", IdenticallyZero),
    case!("appendixB.b", "β₋ = 0, γ₋ > 0, α₊ < 0, 0 < x* < 1/γ₋", IPositive),
    case!("appendixB.c", "β₋ = 0, γ₋ > 0, α₊ = 0", INegative),
    case!("appendixB.d", "β₋ = 0, γ₋ > 0, α₊ > 0", INegative),
    case!("appendixB.e", "β₋ = 0, γ₋ = 0, α₊ < 0", IPositive),
    case!("appendixB.f", "β₋ = 0, γ₋ = 0, α₊ = 0", IdenticallyZero),
    case!("appendixB.g", "β₋ = 0, γ₋ = 0, α₊ > 0", INegative),
];

pub fn case_spec(id: &str) -> Option<&'static CaseSpec> {
    CATALOG.iter().find(|c| c.id == id)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct Prediction<T> {
    /// Catalog id, suffixed with `/reflected` when the case was reached
    /// through the `γ₋ ↦ −γ₋` reflection.
    pub case_id: String,
    pub claim: Claim,
    pub cyclicity_bound: Option<u8>,
    pub cycle_stability: Option<CycleStability>,
    pub domain_b: SdiDomain<T>,
    pub reflected: bool,
}

/// Catalog case for `γ₋ ≥ 0`. Boundary cases use exact comparisons, written
/// as sign tests on polynomial expressions in the inputs:
/// `x* ⋛ 1/γ₋ ⇔ α₊ + γ₋c ⋛ 0` and `x* ⋛ 2/γ₋ ⇔ 2α₊ + γ₋c ⋛ 0` (for
/// `α₊ < 0`, `c = B − δ₊`), `α₊²V(x*) = β₋c² + γ₋cα₊ + α₊²`.
fn classify_case<T: Real>(nf: &NormalForm<T>) -> &'static str {
    let zero = T::zero();
    let (a, b, g, c) = (nf.alpha_plus(), nf.beta_minus(), nf.gamma_minus(), nf.gap());
    debug_assert!(g >= zero);
    let s1 = a + g * c;
    let s2 = T::two() * a + g * c;
    let w = b * c * c + g * c * a + a * a;
    // x* to the right of the vertex γ₋/(2β₋) of V (β₋ > 0, α₊ < 0)
    let right_of_vertex = T::two() * b * c + a * g > zero;
    let by_reciprocal = |gt: &'static str, eq: &'static str, lt: &'static str| {
        if s1 > zero {
            gt
        } else if s1 == zero {
            eq
        } else {
            lt
        }
    };

    match nf.classify().kind {
        RegimeKind::Saddle if g == zero => {
            if a > zero {
                "mainpart1.2.pos"
            } else if a < zero {
                "mainpart1.2.neg"
            } else {
                "degenerate"
            }
        }
        RegimeKind::Saddle => {
            if a < zero {
                if w > zero {
                    "saddle.5"
                } else if w == zero {
                    "saddle.4"
                } else {
                    by_reciprocal("saddle.1", "saddle.2", "saddle.3")
                }
            } else if a > zero {
                if w > zero {
                    "saddle.6"
                } else if w == zero {
                    "saddle.7"
                } else {
                    "saddle.8"
                }
            } else {
                "saddle.9"
            }
        }
        RegimeKind::NodeDistinct => {
            if a < zero {
                if w < zero {
                    "node-distinct.3"
                } else if w == zero {
                    if right_of_vertex {
                        "node-distinct.2"
                    } else {
                        "node-distinct.4"
                    }
                } else if right_of_vertex {
                    "node-distinct.1"
                } else {
                    by_reciprocal("node-distinct.5", "node-distinct.6", "node-distinct.7")
                }
            } else if a > zero {
                "node-distinct.8"
            } else {
                "node-distinct.9"
            }
        }
        RegimeKind::NodeRepeated => {
            if a < zero {
                if s2 > zero {
                    "node-repeated.1"
                } else if s2 == zero {
                    "node-repeated.2"
                } else {
                    by_reciprocal("node-repeated.3", "node-repeated.4", "node-repeated.5")
                }
            } else if a > zero {
                "node-repeated.6"
            } else {
                "node-repeated.7"
            }
        }
        RegimeKind::Focus => {
            if a < zero {
                by_reciprocal("focus.1", "focus.2", "focus.3")
            } else if a > zero {
                "focus.4"
            } else {
                "focus.5"
            }
        }
        RegimeKind::Center => {
            if a < zero {
                "appendixA.a"
            } else if a == zero {
                "appendixA.b"
            } else {
                "appendixA.c"
            }
        }
        RegimeKind::InvariantLine => {
            if a < zero {
                by_reciprocal("appendixB.a", "appendixB.a0", "appendixB.b")
            } else if a == zero {
                "appendixB.c"
            } else {
                "appendixB.d"
            }
        }
        RegimeKind::Parabola => {
            if a < zero {
                "appendixB.e"
            } else if a == zero {
                "appendixB.f"
            } else {
                "appendixB.g"
            }
        }
    }
}

/// Prediction for the slow divergence integral of `nf`.
pub fn predict<T: Real>(nf: &NormalForm<T>) -> Prediction<T> {
    let reflected = nf.gamma_minus() < T::zero();
    let base = if reflected { nf.reflect() } else { *nf };
    let spec = case_spec(classify_case(&base)).expect("catalog covers every case");
    let claim = if reflected { spec.claim.reflected() } else { spec.claim };
    debug_assert_eq!(claim == Claim::IdenticallyZero, is_identically_zero(nf));
    Prediction {
        case_id: if reflected {
            format!("{}/reflected", spec.id)
        } else {
            spec.id.to_string()
        },
        claim,
        cyclicity_bound: claim.cyclicity_bound(),
        cycle_stability: claim.cycle_stability(),
        domain_b: sdi_domain(nf),
        reflected,
    }
}

/// Identically-zero tolerance on `max |I|` over the scan grid.
pub const ZERO_MAX_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct Verdict<T> {
    pub pass: bool,
    pub prediction: Prediction<T>,
    pub observed_profile: SignProfile,
    pub zero_count: usize,
    pub zeros: Vec<T>,
    pub max_abs_i: T,
    pub detail: String,
}

/// Compare the prediction with a numeric zero search.
pub fn crosscheck<T: Real, P: Regularization<T> + ?Sized>(
    nf: &NormalForm<T>,
    phi: &P,
    theta: Option<T>,
) -> (Verdict<T>, SdiReport<T>) {
    let prediction = predict(nf);
    let theta = theta.unwrap_or_else(|| ZeroSearch::default_theta(&prediction.domain_b));
    let report = find_sdi_zeros(nf, phi, ZeroSearch { theta, n_grid: ZeroSearch::<T>::DEFAULT_GRID });
    let verdict = judge(prediction, &report);
    (verdict, report)
}

pub fn judge<T: Real>(prediction: Prediction<T>, report: &SdiReport<T>) -> Verdict<T> {
    let count = report.zero_count();
    let profile = report.sign_profile;
    let (pass, detail) = if report.failures > 0 {
        (false, format!("{} grid points failed to evaluate", report.failures))
    } else {
        match prediction.claim {
            Claim::INegative => (
                profile == SignProfile::AllNegative && count == 0,
                format!("expected I < 0, observed {profile:?} with {count} zero(s)"),
            ),
            Claim::IPositive => (
                profile == SignProfile::AllPositive && count == 0,
                format!("expected I > 0, observed {profile:?} with {count} zero(s)"),
            ),
            Claim::AtMostOneZero => (count <= 1, format!("expected at most one zero, found {count}")),
            Claim::ExactlyOneZero => (
                count == 1 && report.zeros[0].multiplicity != Multiplicity::Double,
                format!("expected exactly one zero, found {count}"),
            ),
            Claim::IdenticallyZero => (
                report.identically_zero && report.max_abs_i <= T::lit(ZERO_MAX_TOL),
                format!("expected I ≡ 0, max |I| = {:e}", report.max_abs_i.as_f64()),
            ),
        }
    };
    Verdict {
        pass,
        prediction,
        observed_profile: profile,
        zero_count: count,
        zeros: report.zeros.iter().map(|z| z.x0).collect(),
        max_abs_i: report.max_abs_i,
        detail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(beta: f64, gamma: f64, alpha: f64) -> NormalForm<f64> {
        NormalForm::reduced(beta, gamma, 2.0, alpha, 1.0).unwrap()
    }

    #[test]
    fn catalog_ids_are_unique() {
        for (i, a) in CATALOG.iter().enumerate() {
            for b in &CATALOG[i + 1..] {
                assert_ne!(a.id, b.id);
            }
        }
        assert!(CATALOG.len() >= 33);
    }

    #[test]
    fn representative_cases() {
        let p = predict(&nf(-1.0, 1.0, -20.0 / 19.0));
        assert_eq!(p.case_id, "saddle.3");
        assert_eq!(p.claim, Claim::AtMostOneZero);
        assert_eq!(p.cyclicity_bound, Some(2));

        let p = predict(&nf(2.0, 3.0, -2.5));
        assert_eq!(p.case_id, "node-distinct.5");
        assert_eq!(p.claim, Claim::ExactlyOneZero);

        let p = predict(&nf(1.0, 0.0, -1.0));
        assert_eq!(p.case_id, "appendixA.a");
        assert_eq!(p.cycle_stability, Some(CycleStability::Repelling));
    }

    #[test]
    fn boundaries_are_exact() {
        assert_eq!(predict(&nf(-1.0, 1.0, -1.0)).case_id, "saddle.2");
        assert_eq!(predict(&nf(-2.0, 1.0, -2.0)).case_id, "saddle.4");
        assert_eq!(predict(&nf(-2.0, 1.0, 1.0)).case_id, "saddle.7");
        assert_eq!(predict(&nf(2.0, 3.0, -1.0)).case_id, "node-distinct.2");
        assert_eq!(predict(&nf(2.0, 3.0, -2.0)).case_id, "node-distinct.4");
        assert_eq!(predict(&nf(2.0, 3.0, -3.0)).case_id, "node-distinct.6");
        assert_eq!(predict(&nf(1.0, 2.0, -1.0)).case_id, "node-repeated.2");
        assert_eq!(predict(&nf(1.0, 2.0, -2.0)).case_id, "node-repeated.4");
        assert_eq!(predict(&nf(0.0, 1.0, -1.0)).case_id, "appendixB.a0");
    }

    #[test]
    fn reflection_flips_sign_claims() {
        let base = nf(-1.0, 1.0, -0.5);
        let p = predict(&base);
        let q = predict(&base.reflect());
        assert_eq!(q.case_id, format!("{}/reflected", p.case_id));
        assert_eq!(p.claim, Claim::INegative);
        assert_eq!(q.claim, Claim::IPositive);
        assert_eq!(q.cycle_stability, Some(CycleStability::Repelling));
    }
}
