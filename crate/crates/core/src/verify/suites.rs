use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::golden::{GoldenCase, GOLDEN, SADDLE_TWO_CYCLE};
use super::{SuiteId, SuiteResult, VerifyConfig};
use crate::geometry::{contact_abscissa, contact_gradient, contact_points, contact_residuals, curve_kind, hyperbola_hp, CurveKind};
use crate::halfmap::{half_map_ode_oracle, HalfMap, ShootingOptions};
use crate::model::{NormalForm, RegimeKind};
use crate::numerics::quad::integrate;
use crate::regsim::{locate_canard_window, find_limit_cycles, return_map, default_section_range, RegularizedField, SimConfig, Stability, WindowSearch};
use crate::regularization::Sigmoid;
use crate::sdi::{delta_bar, Sdi, SignProfile};
use crate::theorem::{crosscheck, predict, Claim, CycleStability};

fn golden(id: &str) -> &'static GoldenCase {
    GOLDEN.iter().find(|g| g.id == id).expect("golden id")
}

fn reduced(beta: f64, gamma: f64, alpha: f64) -> NormalForm<f64> {
    NormalForm::reduced(beta, gamma, 2.0, alpha, 1.0).expect("admissible")
}

/// One half-map representative per regime kind; `α₊` does not enter Π.
fn kind_representatives() -> Vec<(RegimeKind, NormalForm<f64>)> {
    vec![
        (RegimeKind::Saddle, reduced(-1.0, 1.0, -1.0)),
        (RegimeKind::NodeDistinct, reduced(2.0, 3.0, -1.0)),
        (RegimeKind::NodeRepeated, reduced(1.0, 2.0, -1.0)),
        (RegimeKind::Focus, reduced(1.0, 1.0, -1.0)),
        (RegimeKind::Center, reduced(1.0, 0.0, -1.0)),
        (RegimeKind::InvariantLine, reduced(0.0, 1.0, -1.0)),
        (RegimeKind::Parabola, reduced(0.0, 0.0, -1.0)),
    ]
}

/// Finite stand-in for an unbounded domain.
const UNBOUNDED_CAP: f64 = 4.0;

fn domain_end(hm: &HalfMap<f64>) -> f64 {
    hm.regime().pi_domain_end.finite().unwrap_or(UNBOUNDED_CAP)
}

fn sdi_end(sdi: &Sdi<f64>) -> f64 {
    sdi.domain().b.finite().unwrap_or(UNBOUNDED_CAP)
}

/// `n` points spread over `[lo, hi]`, both ends included.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub(super) fn halfmap_oracle() -> SuiteResult {
    let mut res = SuiteResult::new(SuiteId::HalfmapOracle);
    let opts = ShootingOptions::default();
    for (kind, nf) in kind_representatives() {
        let hm = HalfMap::new(&nf);
        let d = domain_end(&hm);
        let xs: Vec<f64> = (1..=50).map(|i| 0.9 * d * i as f64 / 50.0).collect();
        let rows: Vec<(f64, Result<(f64, f64), String>)> = xs
            .par_iter()
            .map(|&x| {
                let r = hm
                    .pi(x)
                    .and_then(|p| half_map_ode_oracle(&nf, x, &opts).map(|o| (p, o.pi_x)))
                    .map_err(|e| e.to_string());
                (x, r)
            })
            .collect();
        let mut worst = 0.0f64;
        for (x, r) in rows {
            match r {
                Ok((closed, ode)) => {
                    let err = (closed - ode).abs() / (1.0 + x.abs());
                    worst = worst.max(err);
                    res.check(err <= 1e-8, || format!("{kind} x = {x}: closed form {closed} vs ODE {ode}"));
                }
                Err(e) => res.check(false, || format!("{kind} x = {x}: {e}")),
            }
        }
        res.metric(&format!("max_scaled_err.{kind}"), worst);
    }
    res
}

pub(super) fn halfmap_analytics() -> SuiteResult {
    let mut res = SuiteResult::new(SuiteId::HalfmapAnalytics);
    let mut worst_fd = 0.0f64;
    let mut worst_origin = 0.0f64;
    for (kind, nf) in kind_representatives() {
        let hm = HalfMap::new(&nf);
        let at0 = hm.pi(0.0);
        res.check(at0 == Ok(0.0), || format!("{kind}: Π(0) = {at0:?}"));
        for x in [0.0, 1e-9] {
            let dev = hm.derivative(x).map(|d| (d + 1.0).abs()).unwrap_or(f64::INFINITY);
            worst_origin = worst_origin.max(dev);
            res.check(dev <= 1e-8, || format!("{kind}: |Π′({x}) + 1| = {dev}"));
        }
        let h = 1e-9;
        let slope = hm.pi(h).map(|p| (p / h + 1.0).abs()).unwrap_or(f64::INFINITY);
        worst_origin = worst_origin.max(slope);
        res.check(slope <= 1e-8, || format!("{kind}: |Π(h)/h + 1| = {slope} at h = {h}"));

        let d = domain_end(&hm);
        for x in linspace(0.05 * d, 0.85 * d, 40) {
            let step = 1e-5 * x;
            let fd = match (hm.pi(x + step), hm.pi(x - step)) {
                (Ok(a), Ok(b)) => (a - b) / (2.0 * step),
                _ => f64::NAN,
            };
            let exact = hm.derivative(x).unwrap_or(f64::NAN);
            let rel = ((exact - fd) / exact).abs();
            worst_fd = worst_fd.max(rel);
            res.check(rel <= 1e-6, || format!("{kind} x = {x}: Π′ = {exact}, finite difference {fd}"));
        }
    }
    res.metric("max_rel_err.derivative_vs_fd", worst_fd);
    res.metric("max_err.origin", worst_origin);

    let mut worst_odd = 0.0f64;
    for beta in [-1.0, 0.0, 1.0, -0.25, 2.5] {
        let nf = reduced(beta, 0.0, -1.0);
        let hm = HalfMap::new(&nf);
        let d = domain_end(&hm);
        for x in linspace(0.0, 0.9 * d, 60) {
            let dev = hm.pi(x).map(|p| (p + x).abs()).unwrap_or(f64::INFINITY);
            worst_odd = worst_odd.max(dev);
            res.check(dev <= 1e-10, || format!("γ₋ = 0, β₋ = {beta}, x = {x}: |Π(x) + x| = {dev}"));
        }
    }
    res.metric("max_err.gamma_zero_odd", worst_odd);
    res
}

const QUADRATURE_CASES: [&str; 10] = [
    "saddle.1",
    "saddle.3",
    "node-distinct.5",
    "node-distinct.7",
    "node-repeated.3",
    "focus.1",
    "focus.4",
    "appendixA.c",
    "appendixB.b",
    "appendixB.g",
];

pub(super) fn sdi_quadrature() -> SuiteResult {
    let mut res = SuiteResult::new(SuiteId::SdiQuadrature);
    for id in QUADRATURE_CASES {
        let nf = golden(id).normal_form();
        let sdi = Sdi::new(&nf, &Sigmoid::Arctan);
        let b = sdi_end(&sdi);
        let pref = sdi.prefactor();
        let rows: Vec<(f64, Option<(f64, f64)>)> = linspace(0.05 * b, 0.9 * b, 20)
            .par_iter()
            .map(|&x| {
                let v = sdi.half_map().pi(x).ok().map(|p| {
                    let q = integrate(|u| u / nf.sliding(u), p, x, 1e-13).value;
                    (sdi.value_at(x, p), pref * q)
                });
                (x, v)
            })
            .collect();
        let mut worst = 0.0f64;
        for (x, v) in rows {
            match v {
                Some((cf, q)) => {
                    let err = (cf - q).abs();
                    worst = worst.max(err);
                    res.check(err <= 1e-10, || format!("{id} x = {x}: closed form {cf} vs quadrature {q}"));
                }
                None => res.check(false, || format!("{id} x = {x}: half-map failed")),
            }
        }
        res.metric(&format!("max_abs_err.{id}"), worst);
    }
    res
}

/// Sign with a dead band: values within `floor` count as zero.
fn sign_with_floor(v: f64, floor: f64) -> i8 {
    if v.abs() <= floor {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

pub(super) fn factorization() -> SuiteResult {
    let mut res = SuiteResult::new(SuiteId::Factorization);
    let mut indeterminate = 0usize;
    for gc in GOLDEN {
        let nf = gc.normal_form();
        let sdi = Sdi::new(&nf, &Sigmoid::Arctan);
        let hm = sdi.half_map();
        let b = sdi_end(&sdi);
        let mut skipped = 0usize;
        // the node-repeated half-map overflows f64 well before b
        for x in linspace(0.01 * b, 0.95 * b, 200) {
            let Ok(p) = hm.pi(x) else {
                res.check(false, || format!("{} x = {x}: half-map failed", gc.id));
                continue;
            };
            // Ĩ′ from the chain rule, independent of the factored form
            let dp = hm.derivative_at(x, p);
            let (t1, t2) = (x / nf.sliding(x), p / nf.sliding(p) * dp);
            let direct = t1 - t2;
            let s_direct = sign_with_floor(direct, 1e-11 * (t1.abs() + t2.abs()));
            let a = nf.alpha_plus() * nf.beta_minus();
            let dscale = (a * x * p).abs()
                + (nf.beta_minus() * nf.gap() * (x + p)).abs()
                + (nf.alpha_plus() + nf.gamma_minus() * nf.gap()).abs();
            let db = delta_bar(&nf, x, p);
            let s_delta = sign_with_floor(db, 1e-11 * dscale);
            if s_direct == 0 || s_delta == 0 {
                skipped += 1;
                continue;
            }
            res.check(s_direct == s_delta, || {
                format!("{} x = {x}: Ĩ′ = {direct} but Δ̄(x, Π(x)) = {db}", gc.id)
            });
        }
        if skipped > 0 {
            res.metric(&format!("indeterminate.{}", gc.id), skipped as f64);
        }
        indeterminate += skipped;
    }
    res.metric("indeterminate_points", indeterminate as f64);
    res
}

fn sample_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let v = sample_in(rng, lo, hi);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

/// A random admissible normal form of the given kind satisfying the
/// non-degeneracy condition (so `I` is not identically zero).
pub fn random_normal_form(rng: &mut ChaCha8Rng, kind: RegimeKind) -> NormalForm<f64> {
    let (beta, gamma) = match kind {
        RegimeKind::Saddle => (-sample_in(rng, 0.1, 3.0), signed(rng, 0.1, 3.0)),
        RegimeKind::NodeDistinct => {
            let g = signed(rng, 0.5, 4.0);
            (sample_in(rng, 0.05, 0.95) * g * g / 4.0, g)
        }
        RegimeKind::NodeRepeated => {
            let g = signed(rng, 0.5, 4.0);
            (g * g / 4.0, g)
        }
        RegimeKind::Focus => {
            let g = signed(rng, 0.1, 3.0);
            (g * g / 4.0 * sample_in(rng, 1.05, 4.0), g)
        }
        RegimeKind::Center => (sample_in(rng, 0.1, 3.0), 0.0),
        RegimeKind::InvariantLine => (0.0, signed(rng, 0.1, 3.0)),
        RegimeKind::Parabola => (0.0, 0.0),
    };
    let delta = sample_in(rng, 0.1, 3.0);
    let gap = sample_in(rng, 0.1, 3.0);
    let alpha = signed(rng, 0.05, 5.0);
    NormalForm::new(beta, gamma, delta + gap, alpha, 0.0, delta, 0.0).expect("admissible draw")
}

pub(super) fn theorem_random(cfg: &VerifyConfig) -> SuiteResult {
    let mut res = SuiteResult::new(SuiteId::TheoremRandom);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let draws: Vec<(RegimeKind, NormalForm<f64>)> = (0..cfg.random_draws)
        .map(|i| {
            let kind = RegimeKind::ALL[i % RegimeKind::ALL.len()];
            (kind, random_normal_form(&mut rng, kind))
        })
        .collect();
    let outcomes: Vec<_> = draws
        .par_iter()
        .map(|(kind, nf)| {
            let (verdict, report) = crosscheck(nf, &Sigmoid::Arctan, None);
            (*kind, *nf, verdict, report)
        })
        .collect();
    let (mut partial, mut verdict_fail, mut max_zeros) = (0usize, 0usize, 0usize);
    for (kind, nf, verdict, report) in outcomes {
        if report.failures > 0 || report.truncated_at.is_some() {
            partial += 1;
        }
        if !verdict.pass {
            verdict_fail += 1;
        }
        let count = report.zero_count();
        max_zeros = max_zeros.max(count);
        res.check(!report.identically_zero, || format!("{kind} draw {nf:?} is degenerate"));
        res.check(count <= 1 && report.sign_profile != SignProfile::MultipleSignChanges, || {
            format!(
                "counterexample ({kind}): {nf:?} has {count} zeros {:?}, profile {:?}",
                report.zeros.iter().map(|z| z.x0).collect::<Vec<_>>(),
                report.sign_profile
            )
        });
    }
    res.metric("draws", cfg.random_draws as f64);
    res.metric("max_zero_count", max_zeros as f64);
    res.metric("partial_scans", partial as f64);
    res.metric("case_verdict_mismatches", verdict_fail as f64);
    res
}

pub(super) fn case_table() -> SuiteResult {
    let mut res = SuiteResult::new(SuiteId::CaseTable);
    let verdicts: Vec<_> = GOLDEN
        .par_iter()
        .map(|gc| (gc.id, crosscheck(&gc.normal_form(), &Sigmoid::Arctan, None).0))
        .collect();
    res.check(verdicts.len() >= 33, || format!("only {} golden cases", verdicts.len()));
    for (id, v) in verdicts {
        res.check(v.prediction.case_id == id, || format!("{id} classified as {}", v.prediction.case_id));
        res.check(v.pass, || format!("{id}: {}", v.detail));
    }
    res.metric("cases", GOLDEN.len() as f64);
    res
}

pub(super) fn phi_independence() -> SuiteResult {
    let mut res = SuiteResult::new(SuiteId::PhiIndependence);
    let (mut worst_zero, mut worst_ratio) = (0.0f64, 0.0f64);
    for gc in GOLDEN {
        let nf = gc.normal_form();
        let (_, ra) = crosscheck(&nf, &Sigmoid::Arctan, None);
        let (_, rt) = crosscheck(&nf, &Sigmoid::Tanh, None);
        res.check(ra.zeros.len() == rt.zeros.len(), || {
            format!("{}: {} zeros with arctan, {} with tanh", gc.id, ra.zeros.len(), rt.zeros.len())
        });
        for (za, zt) in ra.zeros.iter().zip(&rt.zeros) {
            let d = (za.x0 - zt.x0).abs();
            worst_zero = worst_zero.max(d);
            res.check(d <= 1e-9, || format!("{}: zero {} vs {}", gc.id, za.x0, zt.x0));
        }
        let expected = ra.prefactor / rt.prefactor;
        for (sa, st) in ra.samples.iter().zip(&rt.samples) {
            if sa.i == 0.0 || st.i == 0.0 {
                res.check(sa.i == st.i, || format!("{} x = {}: I = {} vs {}", gc.id, sa.x, sa.i, st.i));
                continue;
            }
            let rel = (sa.i / st.i - expected).abs() / expected.abs();
            worst_ratio = worst_ratio.max(rel);
            res.check(rel <= 1e-9, || format!("{} x = {}: ratio {} vs prefactor ratio {expected}", gc.id, sa.x, sa.i / st.i));
        }
    }
    res.metric("max_zero_shift", worst_zero);
    res.metric("max_rel_ratio_err", worst_ratio);
    res
}

const SYMMETRY_CASES: [&str; 5] = ["saddle.1", "node-distinct.5", "node-repeated.3", "focus.1", "appendixB.a"];

pub(super) fn symmetry() -> SuiteResult {
    let mut res = SuiteResult::new(SuiteId::Symmetry);
    for id in SYMMETRY_CASES {
        let nf = golden(id).normal_form();
        let refl = nf.reflect();
        let s = Sdi::new(&nf, &Sigmoid::Arctan);
        let sr = Sdi::new(&refl, &Sigmoid::Arctan);
        let b = sdi_end(&s);
        let mut worst = 0.0f64;
        for x in linspace(0.05 * b, 0.9 * b, 30) {
            let v = s.half_map().pi(x).and_then(|p| Ok((s.value_at(x, p), sr.value(-p)?)));
            match v {
                Ok((i, ir)) => {
                    let err = (i + ir).abs();
                    worst = worst.max(err);
                    res.check(err <= 1e-9, || format!("{id} x = {x}: I = {i}, reflected {ir}"));
                }
                Err(e) => res.check(false, || format!("{id} x = {x}: {e}")),
            }
        }
        res.metric(&format!("max_abs_err.{id}"), worst);
    }
    res
}

/// Ordering of the contact abscissa `x_C` within one lemma branch.
pub struct LemmaBranch {
    pub name: &'static str,
    pub sample: fn(&mut ChaCha8Rng) -> NormalForm<f64>,
    pub holds: fn(&NormalForm<f64>, f64) -> bool,
}

/// `x*` as a fraction of the way through `(lo, hi)`, kept off both ends.
fn interior(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * sample_in(rng, 0.02, 0.98)
}

/// Normal form with `B − δ₊ = 1` exactly, so `α₊ = −1/x*`.
fn with_x_star(beta: f64, gamma: f64, x_star: f64, rng: &mut ChaCha8Rng) -> NormalForm<f64> {
    let delta = rng.gen_range(1..=24) as f64 / 8.0;
    NormalForm::new(beta, gamma, delta + 1.0, -1.0 / x_star, 0.0, delta, 0.0).expect("admissible")
}

fn saddle_draw(rng: &mut ChaCha8Rng) -> (f64, f64, f64, f64) {
    let (beta, gamma) = (-sample_in(rng, 0.1, 3.0), sample_in(rng, 0.1, 3.0));
    let disc = (gamma * gamma - 4.0 * beta).sqrt();
    // roots of V in the cancellation-free form
    (beta, gamma, (gamma + disc) / (2.0 * beta), 2.0 / (gamma + disc))
}

fn node_draw(rng: &mut ChaCha8Rng) -> (f64, f64, f64, f64) {
    let gamma = sample_in(rng, 0.5, 4.0);
    let beta = sample_in(rng, 0.05, 0.95) * gamma * gamma / 4.0;
    let disc = (gamma * gamma - 4.0 * beta).sqrt();
    (beta, gamma, 2.0 / (gamma + disc), (gamma + disc) / (2.0 * beta))
}

/// A dyadic `γ₋`, so that `x* = 1/γ₋` and `γ₋x* = 1` are exact.
fn dyadic_gamma(rng: &mut ChaCha8Rng) -> f64 {
    [0.25, 0.5, 1.0, 2.0, 4.0][rng.gen_range(0..5)]
}

pub fn lemma_branches() -> Vec<LemmaBranch> {
    fn at_inverse_gamma(nf: &NormalForm<f64>, xc: f64) -> bool {
        let _ = nf;
        xc == 0.0
    }
    vec![
        LemmaBranch {
            name: "saddle.1",
            sample: |rng| {
                let g = dyadic_gamma(rng);
                with_x_star(-sample_in(rng, 0.1, 3.0), g, 1.0 / g, rng)
            },
            holds: at_inverse_gamma,
        },
        LemmaBranch {
            name: "saddle.2",
            sample: |rng| {
                let (b, g, _, xr) = saddle_draw(rng);
                let xs = interior(rng, xr, 1.0 / g);
                with_x_star(b, g, xs, rng)
            },
            holds: |nf, xc| 0.0 < xc && xc < nf.classify().x_r.unwrap(),
        },
        LemmaBranch {
            name: "saddle.3",
            sample: |rng| {
                let (b, g, xl, xr) = saddle_draw(rng);
                let mut xs = interior(rng, xl, xr);
                if xs == 0.0 {
                    xs = 0.5 * xr;
                }
                with_x_star(b, g, xs, rng)
            },
            holds: |nf, xc| {
                let r = nf.classify();
                r.x_r.unwrap() < xc && xc < -r.x_l.unwrap()
            },
        },
        LemmaBranch {
            name: "saddle.4",
            sample: |rng| {
                let (b, g, xl, _) = saddle_draw(rng);
                let xs = interior(rng, 5.0 * xl, xl);
                with_x_star(b, g, xs, rng)
            },
            holds: |nf, xc| {
                let xl = nf.classify().x_l.unwrap();
                -xl < xc && xc < -nf.x_star().unwrap()
            },
        },
        LemmaBranch {
            name: "node-distinct.1",
            sample: |rng| {
                let (b, g, _, xr) = node_draw(rng);
                let xs = interior(rng, xr, 5.0 * xr);
                with_x_star(b, g, xs, rng)
            },
            holds: |nf, xc| nf.classify().x_r.unwrap() < xc && xc < nf.x_star().unwrap(),
        },
        LemmaBranch {
            name: "node-distinct.2",
            sample: |rng| {
                let (b, g, xl, xr) = node_draw(rng);
                let xs = interior(rng, xl, xr);
                with_x_star(b, g, xs, rng)
            },
            holds: |nf, xc| nf.x_star().unwrap() < xc && xc < nf.classify().x_r.unwrap(),
        },
        LemmaBranch {
            name: "node-distinct.3",
            sample: |rng| {
                let (b, g, xl, _) = node_draw(rng);
                let xs = interior(rng, 1.0 / g, xl);
                with_x_star(b, g, xs, rng)
            },
            holds: |nf, xc| 0.0 < xc && xc < nf.x_star().unwrap(),
        },
        LemmaBranch {
            name: "node-distinct.4",
            sample: |rng| {
                let g = 2.0 * dyadic_gamma(rng);
                let b = sample_in(rng, 0.05, 0.95) * g * g / 4.0;
                with_x_star(b, g, 1.0 / g, rng)
            },
            holds: at_inverse_gamma,
        },
        LemmaBranch {
            name: "node-repeated.1",
            sample: |rng| {
                let g = sample_in(rng, 0.5, 4.0);
                let xs = interior(rng, 2.0 / g, 10.0 / g);
                with_x_star(g * g / 4.0, g, xs, rng)
            },
            holds: |nf, xc| 2.0 / nf.gamma_minus() < xc && xc < nf.x_star().unwrap(),
        },
        LemmaBranch {
            name: "node-repeated.2",
            sample: |rng| {
                let g = sample_in(rng, 0.5, 4.0);
                let xs = interior(rng, 1.0 / g, 2.0 / g);
                with_x_star(g * g / 4.0, g, xs, rng)
            },
            holds: |nf, xc| 0.0 < xc && xc < nf.x_star().unwrap(),
        },
        LemmaBranch {
            name: "node-repeated.3",
            sample: |rng| {
                let g = dyadic_gamma(rng);
                with_x_star(g * g / 4.0, g, 1.0 / g, rng)
            },
            holds: at_inverse_gamma,
        },
    ]
}

/// `hp(hp(x)) − x` on a grid away from the asymptote `x = x*`.
fn involution_error(nf: &NormalForm<f64>) -> f64 {
    let xs = nf.x_star().unwrap();
    let mut worst = 0.0f64;
    for x in linspace(-2.0, 2.0, 81) {
        if (x - xs).abs() < 0.05 {
            continue;
        }
        let Ok(y) = hyperbola_hp(nf, x) else { continue };
        if y.abs() > 1e3 || (y - xs).abs() < 0.05 {
            continue;
        }
        if let Ok(z) = hyperbola_hp(nf, y) {
            worst = worst.max((z - x).abs());
        }
    }
    worst
}

/// Worst residual of the contact system over the emitted points, both in
/// the raw form and the factored tangency form.
fn contact_error(nf: &NormalForm<f64>) -> f64 {
    contact_points(nf)
        .into_iter()
        .map(|(x, y)| {
            let (tangency, on_curve) = contact_residuals(nf, x, y);
            tangency.abs().max(on_curve.abs()).max(contact_gradient(nf, x, y).abs())
        })
        .fold(0.0, f64::max)
}

pub(super) fn geometry(cfg: &VerifyConfig) -> SuiteResult {
    let mut res = SuiteResult::new(SuiteId::Geometry);
    let (mut worst_inv, mut worst_contact) = (0.0f64, 0.0f64);
    let mut check_geometry = |res: &mut SuiteResult, label: &str, nf: &NormalForm<f64>| {
        if curve_kind(nf) == CurveKind::Hyperbola {
            let e = involution_error(nf);
            worst_inv = worst_inv.max(e);
            res.check(e <= 1e-10, || format!("{label}: |hp(hp(x)) − x| = {e}"));
        }
        let e = contact_error(nf);
        worst_contact = worst_contact.max(e);
        res.check(e <= 1e-10, || format!("{label}: contact residual {e}"));
    };
    for gc in GOLDEN {
        check_geometry(&mut res, gc.id, &gc.normal_form());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    for branch in lemma_branches() {
        for k in 0..cfg.lemma_draws {
            let nf = (branch.sample)(&mut rng);
            let label = format!("lemma {} draw {k}", branch.name);
            check_geometry(&mut res, &label, &nf);
            let xc = contact_abscissa(&nf);
            res.check(xc.is_some_and(|xc| (branch.holds)(&nf, xc)), || {
                format!("{label}: x_C = {xc:?} violates the ordering for {nf:?}")
            });
        }
    }
    res.metric("max_involution_err", worst_inv);
    res.metric("max_contact_residual", worst_contact);
    res
}

fn sim_config(cfg: &VerifyConfig) -> SimConfig {
    SimConfig { epsilon: cfg.epsilon, ..SimConfig::default() }
}

pub(super) fn two_cycle(cfg: &VerifyConfig) -> SuiteResult {
    let mut res = SuiteResult::new(SuiteId::TwoCycle);
    let nf = SADDLE_TWO_CYCLE.normal_form();
    let (verdict, report) = crosscheck(&nf, &Sigmoid::Arctan, None);
    res.check(verdict.pass && report.zeros.len() == 1, || format!("saddle.3 SDI: {}", verdict.detail));
    if let Some(z) = report.zeros.first() {
        res.metric("sdi_zero", z.x0);
    }
    let sim = sim_config(cfg);
    let window = match locate_canard_window(&nf, Sigmoid::Arctan, &sim, 2, &WindowSearch::default()) {
        Ok(w) => w,
        Err(e) => {
            res.fail(format!("window search failed: {e}"));
            return res;
        }
    };
    let Some((lo, hi)) = window.window else {
        res.fail("no unfolding value with exactly two cycles".into());
        return res;
    };
    res.checks += 1;
    res.metric("window_lo", lo);
    res.metric("window_hi", hi);
    let at = sim.with_lambda_tilde(lo);
    let field = RegularizedField::new(&nf, Sigmoid::Arctan, &at);
    let (ylo, yhi) = window.table.y_range;
    let scan = match find_limit_cycles(&field, &at, ylo, yhi, window.table.n_scan) {
        Ok(s) => s,
        Err(e) => {
            res.fail(format!("cycle scan failed: {e}"));
            return res;
        }
    };
    res.check(scan.cycles.len() == 2, || format!("{} cycles at λ̃ = {lo}", scan.cycles.len()));
    if scan.cycles.len() == 2 {
        let (m0, m1) = (scan.cycles[0].multiplier, scan.cycles[1].multiplier);
        res.check((m0 - 1.0) * (m1 - 1.0) < 0.0, || format!("multipliers {m0}, {m1} on the same side of 1"));
    }
    check_cycles(&mut res, &nf, &scan.cycles, cfg);
    res
}

fn check_cycles(res: &mut SuiteResult, nf: &NormalForm<f64>, cycles: &[crate::regsim::LimitCycle], cfg: &VerifyConfig) {
    for (k, c) in cycles.iter().enumerate() {
        res.metric(&format!("cycle{k}.section_point"), c.section_point);
        res.metric(&format!("cycle{k}.multiplier"), c.multiplier);
        res.metric(&format!("cycle{k}.period"), c.period);
        res.check(c.residual <= 1e-9, || format!("cycle {k}: residual {}", c.residual));
        match c.canard_distance(nf, cfg.epsilon) {
            Ok((x_hat, d)) => {
                res.metric(&format!("cycle{k}.layer_exit"), x_hat);
                res.metric(&format!("cycle{k}.hausdorff"), d);
                res.check(d <= cfg.hausdorff_c * cfg.epsilon, || {
                    format!("cycle {k}: Hausdorff distance {d} to the canard cycle through {x_hat}")
                });
            }
            Err(e) => res.check(false, || format!("cycle {k}: no canard reference: {e}")),
        }
    }
}

/// Forward iteration from a point displaced off the fixed point: the
/// displacement must shrink for an attracting cycle and grow otherwise.
fn iteration_agrees(field: &RegularizedField, sim: &SimConfig, c: &crate::regsim::LimitCycle) -> bool {
    let y0 = c.section_point * (1.0 + 1e-7);
    let d0 = (y0 - c.section_point).abs();
    let Ok(r) = return_map(field, sim, y0, false) else {
        // an orbit leaving the canard region moved away from the cycle
        return c.stability == Stability::Repelling;
    };
    let d1 = (r.y1 - c.section_point).abs();
    match c.stability {
        Stability::Attracting => d1 < d0,
        Stability::Repelling => d1 > d0,
    }
}

const SINGLE_CYCLE_CASES: [&str; 2] = ["focus.4", "focus.2"];

pub(super) fn single_cycle(cfg: &VerifyConfig) -> SuiteResult {
    let mut res = SuiteResult::new(SuiteId::SingleCycle);
    let sim = sim_config(cfg);
    for id in SINGLE_CYCLE_CASES {
        let nf = golden(id).normal_form();
        let claim = predict(&nf).claim;
        let expected = match claim.cycle_stability() {
            Some(CycleStability::Attracting) => Stability::Attracting,
            Some(CycleStability::Repelling) => Stability::Repelling,
            _ => {
                res.fail(format!("{id}: claim {claim:?} does not fix a stability"));
                continue;
            }
        };
        res.check(matches!(claim, Claim::INegative | Claim::IPositive), || format!("{id}: claim {claim:?}"));
        let window = match locate_canard_window(&nf, Sigmoid::Arctan, &sim, 1, &WindowSearch::default()) {
            Ok(w) => w,
            Err(e) => {
                res.fail(format!("{id}: window search failed: {e}"));
                continue;
            }
        };
        let max_count = window.table.rows.iter().map(|r| r.count).max().unwrap_or(0);
        res.check(max_count <= 1, || format!("{id}: {max_count} cycles somewhere in the sweep"));
        let Some((lo, _)) = window.window else {
            res.fail(format!("{id}: no unfolding value with a cycle"));
            continue;
        };
        let at = sim.with_lambda_tilde(lo);
        let field = RegularizedField::new(&nf, Sigmoid::Arctan, &at);
        let (ylo, yhi) = match default_section_range(&nf, at.epsilon) {
            Ok(r) => r,
            Err(e) => {
                res.fail(format!("{id}: {e}"));
                continue;
            }
        };
        let cycles = find_limit_cycles(&field, &at, ylo, yhi, window.table.n_scan).map(|s| s.cycles).unwrap_or_default();
        res.metric(&format!("{id}.lambda_tilde"), lo);
        res.check(cycles.len() == 1, || format!("{id}: {} cycles at λ̃ = {lo}", cycles.len()));
        if let [c] = cycles.as_slice() {
            res.check(c.stability == expected, || {
                format!("{id}: cycle is {:?} (multiplier {}), predicted {expected:?}", c.stability, c.multiplier)
            });
            res.check(iteration_agrees(&field, &at, c), || format!("{id}: forward iteration contradicts multiplier {}", c.multiplier));
            res.metric(&format!("{id}.multiplier"), c.multiplier);
            res.metric(&format!("{id}.section_point"), c.section_point);
            if let Ok((_, d)) = c.canard_distance(&nf, cfg.epsilon) {
                res.metric(&format!("{id}.hausdorff"), d);
            }
        }
    }
    res
}
