use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vi3_core::halfmap::{HalfMap, BOUNDARY_GUARD};
use vi3_core::numerics::quad::integrate;
use vi3_core::regularization::{Regularization, Sigmoid};
use vi3_core::sdi::Sdi;
use vi3_core::verify::random_normal_form;
use vi3_core::{NormalForm, RegimeKind};

fn normal_form() -> impl Strategy<Value = (RegimeKind, NormalForm<f64>)> {
    (0..RegimeKind::ALL.len(), any::<u64>()).prop_map(|(k, seed)| {
        let kind = RegimeKind::ALL[k];
        (kind, random_normal_form(&mut ChaCha8Rng::seed_from_u64(seed), kind))
    })
}

/// Finite part of the half-map domain worth sampling.
fn sample_end(hm: &HalfMap<f64>) -> f64 {
    hm.regime().pi_domain_end.finite().unwrap_or(4.0).min(4.0)
}

fn sdi_end(s: &Sdi<f64>) -> f64 {
    s.domain().b.finite().unwrap_or(4.0).min(4.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_draws_have_the_requested_kind((kind, nf) in normal_form()) {
        prop_assert_eq!(nf.classify().kind, kind);
    }

    #[test]
    fn antiderivative_matches_quadrature((_, nf) in normal_form(), t in -0.8f64..0.8) {
        let hm = HalfMap::new(&nf);
        let r = hm.regime();
        let end = if t >= 0.0 { r.pi_domain_end.finite() } else { r.pi_image_end.finite().map(f64::abs) };
        let u = t * end.unwrap_or(4.0).min(4.0);
        let quad = integrate(|s| -s / nf.v(s), 0.0, u, 1e-13).value;
        let f = hm.antiderivative(u).unwrap();
        prop_assert!((f - quad).abs() <= 1e-10 * (1.0 + quad.abs()), "F({u}) = {f}, quadrature {quad}");
    }

    #[test]
    fn half_map_is_a_decreasing_involution_of_levels((_, nf) in normal_form(), t in 0.01f64..0.9) {
        let hm = HalfMap::new(&nf);
        let x = t * sample_end(&hm);
        let y = hm.pi(x).unwrap();
        prop_assert!(y < 0.0);
        let (fx, fy) = (hm.antiderivative(x).unwrap(), hm.antiderivative(y).unwrap());
        // near a finite image end V(y) → 0 and F is steep, so allow for a few
        // ulps of error in y itself
        let slope = (y / nf.v(y)).abs();
        let tol = 1e-10 * (1.0 + fx.abs()) + slope * 4.0 * f64::EPSILON * y.abs();
        prop_assert!((fx - fy).abs() <= tol, "F(x) = {fx}, F(Π(x)) = {fy}");
        if hm.regime().pi_image_end.finite().is_none_or(|e| y - e > BOUNDARY_GUARD) {
            let back = hm.inverse(y).unwrap();
            prop_assert!((back - x).abs() <= 1e-9 * (1.0 + x), "Π⁻¹(Π({x})) = {back}");
        }
        prop_assert!(hm.derivative(x).unwrap() < 0.0);
        prop_assert!(hm.pi(x * 0.99).unwrap() > y);
    }

    #[test]
    fn reflection_identity((_, nf) in normal_form(), t in 0.05f64..0.9) {
        let s = Sdi::new(&nf, &Sigmoid::Arctan);
        let sr = Sdi::new(&nf.reflect(), &Sigmoid::Arctan);
        let x = t * sdi_end(&s);
        let p = s.half_map().pi(x).unwrap();
        // −Π(x) inside the boundary guard of the reflected domain is refused
        let guarded = s.half_map().regime().pi_image_end.finite().is_some_and(|e| p - e <= BOUNDARY_GUARD);
        prop_assume!(!guarded);
        let (i, ir) = (s.value_at(x, p), sr.value(-p).unwrap());
        prop_assert!((i + ir).abs() <= 1e-9 * (1.0 + i.abs()), "I = {i}, reflected {ir}");
    }

    #[test]
    fn regularization_enters_only_through_the_prefactor((_, nf) in normal_form(), t in 0.05f64..0.9) {
        let a = Sdi::new(&nf, &Sigmoid::Arctan);
        let h = Sdi::new(&nf, &Sigmoid::Tanh);
        let x = t * sdi_end(&a);
        let (ia, ih) = (a.value(x).unwrap(), h.value(x).unwrap());
        let expected = a.prefactor() / h.prefactor();
        prop_assert!((ia - expected * ih).abs() <= 1e-12 * ia.abs().max(1e-300));
    }

    #[test]
    fn sliding_antiderivative_differentiates_to_integrand((_, nf) in normal_form(), t in -0.9f64..0.9) {
        let s = Sdi::new(&nf, &Sigmoid::Arctan);
        let scale = nf.x_star().map_or(2.0, |xs| xs.abs().min(2.0));
        let u = t * scale;
        // the integrand has a pole at x*, so the step shrinks with the distance to it
        let gap = nf.x_star().map_or(1.0, |xs| (u - xs).abs());
        let h = 1e-4 * gap.min(1.0 + u.abs());
        let fd = (s.sliding_antiderivative(u + h) - s.sliding_antiderivative(u - h)) / (2.0 * h);
        let exact = u / nf.sliding(u);
        prop_assert!((fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()), "FD {fd} vs {exact}");
    }

    #[test]
    fn tilde_derivative_matches_finite_difference((_, nf) in normal_form(), t in 0.1f64..0.85) {
        let s = Sdi::new(&nf, &Sigmoid::Arctan);
        let x = t * sdi_end(&s);
        let h = 1e-6 * x;
        let bare = |x: f64| s.value(x).unwrap() / s.prefactor();
        let fd = (bare(x + h) - bare(x - h)) / (2.0 * h);
        let exact = s.tilde_prime(x).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-5 * (1.0 + exact.abs()), "FD {fd} vs {exact}");
    }

    #[test]
    fn sigmoids_are_monotone_with_unit_range(s in -50.0f64..50.0, ds in 1e-3f64..1.0) {
        for phi in Sigmoid::ALL {
            let (a, b) = (phi.value(s), phi.value(s + ds));
            prop_assert!((0.0..=1.0).contains(&a) && a <= b);
            prop_assert!(phi.derivative(s) >= 0.0);
            if (1e-6..1.0 - 1e-6).contains(&a) {
                let back = phi.inverse(a);
                prop_assert!((back - s).abs() <= 1e-6 * (1.0 + s.abs()));
            }
        }
    }
}
