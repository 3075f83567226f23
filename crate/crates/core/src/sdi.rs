//! Slow divergence integral of the sliding segment `[Π(x), x]`:
//!
//! ```text
//! I(x) = (1+δ₊) φ′(φ⁻¹(1/(1+δ₊))) ∫_{Π(x)}^{x} u / X^{sl}(u) du
//! ```
//!
//! and the search for its zeros.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfmap::HalfMap;
use crate::model::{ExtReal, NormalForm};
use crate::numerics::root::{brent_with_values, Tolerance};
use crate::regularization::Regularization;
use crate::scalar::{log1p_quotient, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DomainBinding {
    /// `b` is the end of the half-map domain.
    PiDomain,
    /// `b = x*` with `0 < x*` before the end of the half-map domain.
    XStarRight,
    /// `b = Π⁻¹(x*)` with `x* < 0` inside the half-map image.
    XStarLeftPreimage,
}

/// The SDI is defined on `[0, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SdiDomain<T> {
    pub b: ExtReal<T>,
    pub binding: DomainBinding,
}

/// Largest `[0, b)` inside the half-map domain on which the sliding field is
/// positive along every segment `[Π(x), x]`.
pub fn sdi_domain<T: Real>(nf: &NormalForm<T>) -> SdiDomain<T> {
    let hm = HalfMap::new(nf);
    domain_with(&hm)
}

fn domain_with<T: Real>(hm: &HalfMap<T>) -> SdiDomain<T> {
    let r = hm.regime();
    let end = r.pi_domain_end;
    let pi_domain = SdiDomain {
        b: end,
        binding: DomainBinding::PiDomain,
    };
    let Some(xs) = hm.normal_form().x_star() else {
        return pi_domain;
    };
    if xs > T::zero() {
        if end.gt(xs) {
            SdiDomain {
                b: ExtReal::Finite(xs),
                binding: DomainBinding::XStarRight,
            }
        } else {
            pi_domain
        }
    } else if r.pi_image_end.lt(xs) {
        // x* within the boundary guard of a finite image end has its
        // preimage indistinguishable from the domain end
        match hm.inverse(xs) {
            Ok(b) => SdiDomain {
                b: ExtReal::Finite(b),
                binding: DomainBinding::XStarLeftPreimage,
            },
            Err(_) => pi_domain,
        }
    } else {
        pi_domain
    }
}

/// `(1+δ₊) φ′(φ⁻¹(1/(1+δ₊)))`, the positive constant in front of the integral.
pub fn phi_prefactor<T: Real, P: Regularization<T> + ?Sized>(phi: &P, delta_plus: T) -> T {
    let one_plus = T::one() + delta_plus;
    one_plus * phi.derivative(phi.inverse(T::one() / one_plus))
}

/// The parameter condition under which the SDI vanishes identically:
/// `(α₊, γ₋) = (0, 0)`, or `β₋ = 0` and `α₊ + γ₋(B − δ₊) = 0`.
pub fn is_identically_zero<T: Real>(nf: &NormalForm<T>) -> bool {
    let zero = T::zero();
    (nf.alpha_plus() == zero && nf.gamma_minus() == zero)
        || (nf.beta_minus() == zero && nf.alpha_plus() + nf.gamma_minus() * nf.gap() == zero)
}

/// `Δ̄(x, y) = α₊β₋xy + β₋(B−δ₊)(x+y) − α₊ − γ₋(B−δ₊)`.
pub fn delta_bar<T: Real>(nf: &NormalForm<T>, x: T, y: T) -> T {
    let (a, b, g, c) = (nf.alpha_plus(), nf.beta_minus(), nf.gamma_minus(), nf.gap());
    a * b * x * y + b * c * (x + y) - a - g * c
}

/// SDI of one normal form with half-map, domain and prefactor cached.
#[derive(Debug, Clone, Copy)]
pub struct Sdi<T> {
    hm: HalfMap<T>,
    domain: SdiDomain<T>,
    prefactor: T,
}

impl<T: Real> Sdi<T> {
    pub fn new<P: Regularization<T> + ?Sized>(nf: &NormalForm<T>, phi: &P) -> Self {
        let hm = HalfMap::new(nf);
        Sdi {
            domain: domain_with(&hm),
            prefactor: phi_prefactor(phi, nf.delta_plus()),
            hm,
        }
    }

    pub fn normal_form(&self) -> &NormalForm<T> {
        self.hm.normal_form()
    }

    pub fn half_map(&self) -> &HalfMap<T> {
        &self.hm
    }

    pub fn domain(&self) -> SdiDomain<T> {
        self.domain
    }

    pub fn prefactor(&self) -> T {
        self.prefactor
    }

    /// Antiderivative of `u / X^{sl}(u)` vanishing at 0, valid where the
    /// sliding field is positive.
    pub fn sliding_antiderivative(&self, u: T) -> T {
        let nf = self.hm.normal_form();
        let c = nf.gap();
        let t = nf.alpha_plus() * u / c;
        (T::one() + nf.delta_plus()) * (u * u / c) * log1p_quotient(t)
    }

    fn check(&self, x: T) -> Result<()> {
        if x < T::zero() || !self.domain.b.gt(x) {
            return Err(Error::DomainExceeded {
                x: x.as_f64(),
                end: self.domain.b.to_f64(),
            });
        }
        Ok(())
    }

    /// `I(x)` for `0 ≤ x < b`.
    pub fn value(&self, x: T) -> Result<T> {
        self.check(x)?;
        if x == T::zero() {
            return Ok(T::zero());
        }
        let y = self.hm.pi(x)?;
        Ok(self.value_at(x, y))
    }

    /// `I(x)` given `Π(x)`.
    pub fn value_at(&self, x: T, pi_x: T) -> T {
        self.prefactor * (self.sliding_antiderivative(x) - self.sliding_antiderivative(pi_x))
    }

    /// Derivative of the bare integral `Ĩ(x) = ∫_{Π(x)}^x u/X^{sl}(u) du`.
    pub fn tilde_prime(&self, x: T) -> Result<T> {
        self.check(x)?;
        let y = self.hm.pi(x)?;
        Ok(self.tilde_prime_at(x, y))
    }

    /// `Ĩ′(x)` in factored form, given `Π(x)`:
    /// `x(x−Π)Δ̄(x,Π) / ((1+δ₊) X^{sl}(x) X^{sl}(Π) V(x))`.
    pub fn tilde_prime_at(&self, x: T, pi_x: T) -> T {
        let nf = self.hm.normal_form();
        let num = x * (x - pi_x) * delta_bar(nf, x, pi_x);
        let den = (T::one() + nf.delta_plus()) * nf.sliding(x) * nf.sliding(pi_x) * nf.v(x);
        num / den
    }

    /// `I′(x) = prefactor · Ĩ′(x)`.
    pub fn derivative_at(&self, x: T, pi_x: T) -> T {
        self.prefactor * self.tilde_prime_at(x, pi_x)
    }
}

pub fn sdi<T: Real, P: Regularization<T> + ?Sized>(nf: &NormalForm<T>, phi: &P, x: T) -> Result<T> {
    Sdi::new(nf, phi).value(x)
}

pub fn sdi_tilde_prime<T: Real>(nf: &NormalForm<T>, x: T) -> Result<T> {
    // Ĩ′ does not involve φ; any admissible choice gives the same domain
    Sdi::new(nf, &crate::regularization::ArctanSigmoid).tilde_prime(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Multiplicity {
    Simple,
    Double,
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdiZero<T> {
    pub x0: T,
    pub multiplicity: Multiplicity,
    pub i_prime_at_zero: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignProfile {
    AllNegative,
    AllPositive,
    OneSignChange,
    /// More than one sign change: a counterexample to the one-zero bound.
    MultipleSignChanges,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdiSample<T> {
    pub x: T,
    pub pi_x: T,
    pub i: T,
    pub i_tilde_prime: T,
    pub delta: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroSearch<T> {
    /// Scan window lower end; the window excludes a margin at both ends.
    pub theta: T,
    pub n_grid: usize,
}

impl<T: Real> ZeroSearch<T> {
    pub const DEFAULT_GRID: usize = 512;

    /// `θ = 10⁻³·b`, or `10⁻³` for infinite `b`.
    pub fn default_theta(domain: &SdiDomain<T>) -> T {
        T::lit(1e-3) * domain.b.finite().unwrap_or(T::one())
    }
}

/// Hard cap on the scan window for infinite `b`.
pub const X_MAX: f64 = 1e3;
/// Per-cell subdivision around detected sign changes.
const REFINE: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SdiReport<T> {
    pub nf: NormalForm<T>,
    pub domain: SdiDomain<T>,
    pub prefactor: T,
    pub identically_zero: bool,
    pub zeros: Vec<SdiZero<T>>,
    pub sign_profile: SignProfile,
    pub theta: T,
    pub scan: (T, T),
    pub max_abs_i: T,
    pub max_abs_i_prime: T,
    pub samples: Vec<SdiSample<T>>,
    /// First grid point of a failing tail of the window, if any.
    pub truncated_at: Option<T>,
    /// Grid points where the half-map could not be evaluated, excluding a
    /// truncated tail.
    pub failures: usize,
}

impl<T: Real> SdiReport<T> {
    /// Total zero count, a double zero counting twice.
    pub fn zero_count(&self) -> usize {
        self.zeros
            .iter()
            .map(|z| if z.multiplicity == Multiplicity::Double { 2 } else { 1 })
            .sum()
    }
}

/// Scan window `[θ, b − θ]`, or `[θ, min(1/θ, X_MAX)]` for infinite `b`.
pub fn scan_window<T: Real>(domain: &SdiDomain<T>, theta: T) -> (T, T, bool) {
    match domain.b {
        ExtReal::Finite(b) => (theta, b - theta, false),
        _ => (theta, (T::one() / theta).min(T::lit(X_MAX)), true),
    }
}

fn grid<T: Real>(lo: T, hi: T, n: usize, log: bool) -> Vec<T> {
    let last = T::from_usize(n - 1).unwrap();
    (0..n)
        .map(|i| {
            let s = T::from_usize(i).unwrap() / last;
            if i == n - 1 {
                hi
            } else if log {
                (lo.ln() + s * (hi.ln() - lo.ln())).exp()
            } else {
                lo + s * (hi - lo)
            }
        })
        .collect()
}

/// Locate and classify the zeros of `I` on the scan window.
pub fn find_sdi_zeros<T: Real, P: Regularization<T> + ?Sized>(
    nf: &NormalForm<T>,
    phi: &P,
    search: ZeroSearch<T>,
) -> SdiReport<T> {
    let sdi = Sdi::new(nf, phi);
    let domain = sdi.domain();
    let theta = search.theta;
    let (lo, hi, log) = scan_window(&domain, theta);
    let n = search.n_grid.max(2);
    let xs = grid(lo, hi, n, log);

    let mut samples = Vec::with_capacity(n);
    let mut failed = Vec::new();
    for &x in &xs {
        match sdi.half_map().pi(x) {
            Ok(y) => samples.push(SdiSample {
                x,
                pi_x: y,
                i: sdi.value_at(x, y),
                i_tilde_prime: sdi.tilde_prime_at(x, y),
                delta: delta_bar(nf, x, y),
            }),
            Err(_) => failed.push(x),
        }
    }
    // Failures confined to the top of the window mean Π(x) has left the
    // floating point range (or come within rounding of a finite image end);
    // the scan is truncated there instead of counting them as failures.
    let last_ok = samples.last().map(|s| s.x);
    let truncated_at = match (failed.first(), last_ok) {
        (Some(&f), Some(l)) if f > l => Some(f),
        _ => None,
    };
    let failures = if truncated_at.is_some() { 0 } else { failed.len() };
    let max_abs_i = samples.iter().fold(T::zero(), |m, s| m.max(s.i.abs()));
    let max_abs_i_prime = samples
        .iter()
        .fold(T::zero(), |m, s| m.max((sdi.prefactor() * s.i_tilde_prime).abs()));

    let identically_zero = is_identically_zero(nf);
    let mut report = SdiReport {
        nf: *nf,
        domain,
        prefactor: sdi.prefactor(),
        identically_zero,
        zeros: Vec::new(),
        sign_profile: SignProfile::Zero,
        theta,
        scan: (lo, hi),
        max_abs_i,
        max_abs_i_prime,
        samples,
        truncated_at,
        failures,
    };
    if identically_zero {
        return report;
    }

    let tol_mult = T::lit(1e-6) * max_abs_i_prime;
    let value = |x: T| sdi.value(x).unwrap_or(T::nan());
    let mut zeros = Vec::new();
    let mut sign_changes = 0usize;

    // sign changes of I, each cell subdivided to catch close pairs
    let s = &report.samples;
    for w in s.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.i == T::zero() && is_interior_sample(s, a.x) {
            continue;
        }
        if (a.i < T::zero()) == (b.i < T::zero()) && a.i != T::zero() && b.i != T::zero() {
            continue;
        }
        if b.i == T::zero() {
            zeros.push(classify_zero(&sdi, b.x, tol_mult, true));
            sign_changes += 1;
            continue;
        }
        let sub = grid(a.x, b.x, REFINE + 1, false);
        let vals: Vec<T> = sub.iter().map(|&x| value(x)).collect();
        for k in 0..REFINE {
            let (fa, fb) = (vals[k], vals[k + 1]);
            if !(fa.is_finite() && fb.is_finite()) || (fa < T::zero()) == (fb < T::zero()) {
                continue;
            }
            let tol = Tolerance::default().with_xtol(T::lit(1e-12).min(T::lit(1e-3) * (sub[k + 1] - sub[k])), T::zero());
            if let Ok(x0) = brent_with_values(value, sub[k], fa, sub[k + 1], fb, tol) {
                zeros.push(classify_zero(&sdi, x0, tol_mult, true));
                sign_changes += 1;
            }
        }
    }

    // touching zeros: extrema of I (sign changes of Ĩ′) where I nearly vanishes
    let tp = |x: T| sdi.tilde_prime(x).unwrap_or(T::nan());
    for w in s.windows(2) {
        let (a, b) = (w[0], w[1]);
        if (a.i < T::zero()) != (b.i < T::zero()) {
            continue;
        }
        let (da, db) = (a.i_tilde_prime, b.i_tilde_prime);
        if da == T::zero() || db == T::zero() || (da < T::zero()) == (db < T::zero()) {
            continue;
        }
        let tol = Tolerance::default().with_xtol(T::lit(1e-12), T::zero());
        if let Ok(xe) = brent_with_values(tp, a.x, da, b.x, db, tol) {
            let ie = value(xe);
            if ie.abs() <= T::lit(1e-9) * max_abs_i {
                zeros.push(SdiZero {
                    x0: xe,
                    multiplicity: Multiplicity::Double,
                    i_prime_at_zero: sdi.prefactor() * tp(xe),
                });
            }
        }
    }
    zeros.sort_by(|p, q| p.x0.partial_cmp(&q.x0).unwrap());

    let all_neg = report.samples.iter().all(|s| s.i < T::zero());
    let all_pos = report.samples.iter().all(|s| s.i > T::zero());
    report.sign_profile = match sign_changes {
        0 if all_neg => SignProfile::AllNegative,
        0 if all_pos => SignProfile::AllPositive,
        0 | 1 => SignProfile::OneSignChange,
        _ => SignProfile::MultipleSignChanges,
    };
    report.zeros = zeros;
    report
}

fn is_interior_sample<T: Real>(s: &[SdiSample<T>], x: T) -> bool {
    s.first().is_some_and(|f| f.x != x)
}

fn classify_zero<T: Real>(sdi: &Sdi<T>, x0: T, tol_mult: T, sign_change: bool) -> SdiZero<T> {
    let d = sdi
        .half_map()
        .pi(x0)
        .map(|y| sdi.derivative_at(x0, y))
        .unwrap_or(T::nan());
    let multiplicity = if sign_change && d.abs() > tol_mult {
        Multiplicity::Simple
    } else {
        Multiplicity::Unresolved
    };
    SdiZero {
        x0,
        multiplicity,
        i_prime_at_zero: d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularization::{ArctanSigmoid, TanhSigmoid};

    fn nf(beta: f64, gamma: f64, alpha: f64) -> NormalForm<f64> {
        NormalForm::reduced(beta, gamma, 2.0, alpha, 1.0).unwrap()
    }

    #[test]
    fn domains() {
        let d = sdi_domain(&nf(-1.0, 1.0, 0.0));
        assert_eq!(d.binding, DomainBinding::PiDomain);
        assert!((d.b.finite().unwrap() - 0.618_033_988_749_895).abs() < 1e-14);
        let d = sdi_domain(&nf(-1.0, 1.0, -2.0));
        assert_eq!(d, SdiDomain { b: ExtReal::Finite(0.5), binding: DomainBinding::XStarRight });
        let d = sdi_domain(&nf(1.0, 0.0, 4.0));
        assert_eq!(d.binding, DomainBinding::XStarLeftPreimage);
        assert_eq!(d.b, ExtReal::Finite(0.25));
    }

    #[test]
    fn prefactors() {
        let a = phi_prefactor(&ArctanSigmoid, 1.0f64);
        assert!((a - 2.0 / std::f64::consts::PI).abs() < 1e-15);
        assert!((phi_prefactor(&TanhSigmoid, 1.0f64) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basic_values() {
        let s = Sdi::new(&nf(-1.0, 1.0, -1.0), &ArctanSigmoid);
        assert_eq!(s.value(0.0).unwrap(), 0.0);
        let z = Sdi::new(&nf(1.0, 0.0, 0.0), &ArctanSigmoid);
        assert_eq!(z.value(0.5).unwrap(), 0.0);
        let neg = Sdi::new(&nf(0.0, 1.0, 0.0), &ArctanSigmoid);
        assert!(neg.value(0.3).unwrap() < 0.0);
        assert!(matches!(s.value(0.7), Err(Error::DomainExceeded { .. })));
    }

    #[test]
    fn identically_zero_condition() {
        assert!(is_identically_zero(&nf(1.0, 0.0, 0.0)));
        assert!(is_identically_zero(&nf(0.0, 1.0, -1.0)));
        assert!(!is_identically_zero(&nf(-1.0, 1.0, -1.0)));
    }

    #[test]
    fn delta_bar_identities() {
        let n = nf(-1.0, 1.0, -1.0);
        let r = n.classify();
        assert!(delta_bar(&n, r.x_l.unwrap(), r.x_r.unwrap()).abs() < 1e-15);
        assert_eq!(delta_bar(&n, 0.3, -0.7), delta_bar(&n, -0.7, 0.3));
        let xs = n.x_star().unwrap();
        for x in [-0.4, 0.1, 2.0] {
            assert!((delta_bar(&n, x, xs) + n.alpha_plus() * n.v(xs)).abs() < 1e-14);
        }
    }

    #[test]
    fn focus_has_one_zero() {
        let rep = find_sdi_zeros(
            &nf(1.0, 1.0, -2.0 / 3.0),
            &ArctanSigmoid,
            ZeroSearch { theta: 1.5e-3, n_grid: 512 },
        );
        assert_eq!(rep.zeros.len(), 1);
        assert_eq!(rep.zeros[0].multiplicity, Multiplicity::Simple);
        assert_eq!(rep.sign_profile, SignProfile::OneSignChange);
    }

    #[test]
    fn identically_zero_report() {
        let rep = find_sdi_zeros(&nf(1.0, 0.0, 0.0), &ArctanSigmoid, ZeroSearch { theta: 1e-3, n_grid: 64 });
        assert!(rep.identically_zero);
        assert!(rep.zeros.is_empty());
        assert_eq!(rep.sign_profile, SignProfile::Zero);
        assert!(rep.max_abs_i <= 1e-10);
    }
}
