use vi3_core::halfmap::HalfMap;
use vi3_core::regsim::{
    default_section_range, find_limit_cycles, integrate, lower_section_point, sweep_lambda, sweep_lambda_values, Axis, Direction,
    RegularizedField, Section, SimConfig,
};
use vi3_core::regularization::Sigmoid;
use vi3_core::verify::golden::{GOLDEN, SADDLE_TWO_CYCLE};
use vi3_core::NormalForm;

fn golden(id: &str) -> NormalForm<f64> {
    GOLDEN.iter().find(|g| g.id == id).unwrap().normal_form()
}

/// Upward crossings of `y = level` on the left half-line.
fn upward_at(level: f64) -> Section {
    Section { axis: Axis::Y, level, direction: Direction::Increasing, other_min: f64::NEG_INFINITY, other_max: 0.0 }
}

#[test]
fn lower_field_orbits_land_on_the_half_map() {
    for id in ["saddle.1", "node-distinct.5", "focus.1", "appendixB.b"] {
        let nf = golden(id);
        let hm = HalfMap::new(&nf);
        let end = hm.regime().pi_domain_end.finite().unwrap_or(2.0).min(2.0);
        let cfg = SimConfig::default();
        let field = RegularizedField::lower_only(&nf, &cfg);
        for t in [0.1, 0.4, 0.7] {
            let x = t * end;
            let traj = integrate(&field, &cfg, [x, 0.0], &[upward_at(0.0)], 1, false).unwrap();
            let landed = traj.hits[0].point[0];
            let pi = hm.pi(x).unwrap();
            assert!((landed - pi).abs() <= 1e-8 * (1.0 + pi.abs()), "{id} x = {x}: orbit {landed}, Π {pi}");
        }
    }
}

#[test]
fn regularization_only_perturbs_lower_orbits_below_the_layer() {
    let nf = golden("saddle.1");
    let cfg = SimConfig { epsilon: 0.05, ..SimConfig::default() };
    let below = -10.0 * cfg.epsilon * cfg.epsilon;
    let section = [upward_at(below)];
    let land = |field: &RegularizedField, x: f64| integrate(field, &cfg, [x, below], &section, 1, false).unwrap().hits[0].point[0];
    let lower = RegularizedField::lower_only(&nf, &cfg);
    let end = HalfMap::new(&nf).regime().pi_domain_end.finite().unwrap();
    // arctan leaks an O(ε²/|y|) share of the upper field; tanh leaks e^{-20}
    for (phi, tol) in [(Sigmoid::Arctan, 0.2 * cfg.epsilon), (Sigmoid::Tanh, 1e-8)] {
        let field = RegularizedField::new(&nf, phi, &cfg);
        for x in [0.2 * end, 0.5 * end, 0.7 * end] {
            let (full, reference) = (land(&field, x), land(&lower, x));
            assert!((full - reference).abs() <= tol, "{phi:?} x = {x}: {full} vs {reference}");
        }
    }
}

/// Landing abscissa of the regularized orbit from `(x, −ε²)` on its return
/// to `y = −ε²`. A start on `y = 0` itself is useless: with `δ₊ = 1` and
/// `λ = 0` the axis is the repelling slow manifold and the orbit never dips.
fn regularized_landing(nf: &NormalForm<f64>, phi: Sigmoid, epsilon: f64, x: f64) -> f64 {
    let cfg = SimConfig { epsilon, ..SimConfig::default() };
    let field = RegularizedField::new(nf, phi, &cfg);
    let y0 = -epsilon * epsilon;
    integrate(&field, &cfg, [x, y0], &[upward_at(y0)], 1, false).unwrap().hits[0].point[0]
}

#[test]
fn regularized_orbits_return_near_the_half_map() {
    let nf = golden("saddle.1");
    let hm = HalfMap::new(&nf);
    let end = hm.regime().pi_domain_end.finite().unwrap();
    for phi in Sigmoid::ALL {
        for x in [0.2 * end, 0.4 * end] {
            let pi = hm.pi(x).unwrap();
            let misses: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|&e| (regularized_landing(&nf, phi, e, x) - pi).abs()).collect();
            assert!(misses[0] <= 0.5 * 0.1, "{phi:?} x = {x}: miss {misses:?}");
            // the singular limit is approached at rate ε²
            assert!(misses[0] / misses[1] > 3.0 && misses[1] / misses[2] > 3.0, "{phi:?} x = {x}: {misses:?}");
        }
    }
}

#[test]
fn section_points_decrease_with_the_canard_size() {
    let nf = SADDLE_TWO_CYCLE.normal_form();
    let ys: Vec<f64> = [0.1, 0.3, 0.5].iter().map(|&x| lower_section_point(&nf, x).unwrap()).collect();
    assert!(ys.windows(2).all(|w| w[1] < w[0] && w[0] < 0.0), "{ys:?}");
}

#[test]
fn two_cycle_rows_appear_just_below_the_critical_value() {
    let nf = SADDLE_TWO_CYCLE.normal_form();
    let cfg = SimConfig::default();
    let y_range = default_section_range(&nf, cfg.epsilon).unwrap();
    let values = [-1e-3, -2.5e-11, 1e-3];
    let table = sweep_lambda_values(&nf, Sigmoid::Arctan, &cfg, &values, y_range, 64).unwrap();
    let counts: Vec<usize> = table.rows.iter().map(|r| r.count).collect();
    assert_eq!(counts[1], 2, "{counts:?}");
    let m = &table.rows[1].multipliers;
    assert!((m[0] - 1.0) * (m[1] - 1.0) < 0.0, "{m:?}");
    assert!(counts[2] == 0, "{counts:?}");
}

#[test]
fn return_map_is_increasing_between_the_two_cycles() {
    let nf = SADDLE_TWO_CYCLE.normal_form();
    let cfg = SimConfig::default().with_lambda_tilde(-2.5e-11);
    let field = RegularizedField::new(&nf, Sigmoid::Arctan, &cfg);
    let (lo, hi) = default_section_range(&nf, cfg.epsilon).unwrap();
    let scan = find_limit_cycles(&field, &cfg, lo, hi, 128).unwrap();
    assert_eq!(scan.cycles.len(), 2);
    let (a, b) = (scan.cycles[1].section_point, scan.cycles[0].section_point);
    let between: Vec<(f64, f64)> = scan
        .samples
        .iter()
        .filter(|(y, _)| a < *y && *y < b)
        .map(|&(y, p)| (y, p.expect("orbits between the cycles return")))
        .collect();
    assert!(between.len() >= 4, "{between:?}");
    assert!(between.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1), "{between:?}");
}

#[test]
fn single_cycle_case_never_shows_two() {
    let nf = golden("focus.4");
    let cfg = SimConfig::default();
    let y_range = default_section_range(&nf, cfg.epsilon).unwrap();
    let table = sweep_lambda(&nf, Sigmoid::Arctan, &cfg, (-1e-3, 1e-3), 16, y_range, 32).unwrap();
    assert!(table.rows.iter().all(|r| r.count <= 1));
}

#[test]
fn sweeps_do_not_depend_on_thread_count() {
    let nf = golden("focus.2");
    let cfg = SimConfig::default();
    let y_range = default_section_range(&nf, cfg.epsilon).unwrap();
    let values = [0.0, 1.05e-10, 1e-3];
    let on = |n: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        let t = pool.install(|| sweep_lambda_values(&nf, Sigmoid::Arctan, &cfg, &values, y_range, 48).unwrap());
        serde_json::to_string(&t).unwrap()
    };
    assert_eq!(on(1), on(6));
}
