use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn vi3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vi3")).args(args).output().expect("spawn vi3")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn classify_saddle_reports_kind_and_right_root() {
    let o = vi3(&["classify", "--case", "saddle.1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["regime"]["kind"], "Saddle");
    let x_r = v["regime"]["x_r"].as_f64().unwrap();
    assert!((x_r - 2.0 / (1.0 + 5f64.sqrt())).abs() < 1e-15);
    assert_eq!(v["prediction"]["case_id"], "saddle.1");
}

#[test]
fn inadmissible_parameters_exit_2() {
    let o = vi3(&[
        "classify", "--set", "beta_minus=-1", "--set", "gamma_minus=1", "--set", "drift=1", "--set",
        "alpha_plus=-1", "--set", "delta_plus=1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("must exceed"));
    assert_eq!(vi3(&["classify"]).status.code(), Some(2));
    assert_eq!(vi3(&["classify", "--case", "no-such-case"]).status.code(), Some(2));
}

#[test]
fn classify_csv_is_one_row_in_fixed_order() {
    let o = vi3(&["classify", "--case", "focus.1", "--format", "csv"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert_eq!(
        rows[0],
        [
            "kind", "eigenvalue_1", "eigenvalue_2", "x_l", "x_r", "x_star", "b", "binding", "curve_kind",
            "contact_points", "case_id", "claim"
        ]
    );
    assert_eq!(rows[1][0], "Focus");
    assert_eq!(rows[1][10], "focus.1");
}

#[test]
fn sdi_marks_the_single_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = vi3(&["sdi", "--case", "node-distinct.5", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("PASS case=node-distinct.5"));
    let v = json(&o);
    assert_eq!(v["report"]["zeros"].as_array().unwrap().len(), 1);
    assert_eq!(read(dir.path(), "sdi.svg").matches("<circle").count(), 1);

    let samples = read(dir.path(), "samples.csv");
    let rows = csv_rows(&samples);
    assert_eq!(rows[0], ["x", "I", "I_tilde_prime", "delta"]);
    assert_eq!(rows.len(), 513);
    assert!(!samples.contains('\r'));
    // seventeen significant digits in every cell
    for cell in rows[1..].iter().flatten() {
        let mantissa = cell.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.len(), 18, "{cell}");
        cell.parse::<f64>().unwrap();
    }
}

#[test]
fn sdi_identically_zero_case_passes_flat() {
    let o = vi3(&["sdi", "--case", "degenerate", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("PASS case=degenerate"));
    for row in &csv_rows(&stdout(&o))[1..] {
        assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn sweep_emits_one_row_per_point() {
    let o = vi3(&[
        "sweep", "--case", "saddle.3", "--set", "sweep_min=-2", "--set", "sweep_max=-0.5", "--set", "sweep_steps=7",
        "--format", "csv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0][0], "alpha_plus");
    assert!(rows[1..].iter().all(|r| r.last().unwrap() == "PASS"));
}

#[test]
fn portrait_marks_contact_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(vi3(&["portrait", "--case", "saddle.3", "--out", out]).status.success());
    let svg = read(dir.path(), "portrait.svg");
    let x_c = (0.05f64).sqrt();
    assert!(svg.contains(&format!("({x_c:.4}, {:.4})", -x_c)), "contact point label missing");
    assert!(svg.contains("#c0392b"), "hyperbola branch missing");
    assert!(read(dir.path(), "orbits.svg").contains("<polyline"));
}

#[test]
fn portrait_special_cases_render() {
    let line = vi3(&["portrait", "--case", "saddle.1", "--set", "alpha_plus=0"]);
    assert!(line.status.success());
    let svg = stdout(&line);
    assert!(svg.contains("#c0392b"));
    for case in ["appendixA.a", "appendixB.e"] {
        let o = vi3(&["portrait", "--case", case]);
        assert!(o.status.success(), "{case}: {}", stderr(&o));
        assert!(stdout(&o).contains("<polyline"));
    }
}

#[test]
fn outputs_are_reproducible() {
    let run = |jobs: &str| {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap().to_string();
        let o = vi3(&[
            "verify", "--jobs", jobs, "--out", &out, "--suite", "case-table", "--suite", "theorem-random", "--suite",
            "geometry",
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let p = vi3(&["portrait", "--case", "focus.4", "--out", &out]);
        assert!(p.status.success());
        (read(dir.path(), "summary.json"), read(dir.path(), "portrait.svg"), stdout(&o))
    };
    let (a, b) = (run("1"), run("4"));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.0).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["suites"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_filters_suites_and_rejects_unknown_names() {
    let o = vi3(&["verify", "--suite", "halfmap-oracle", "--format", "csv"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0], "halfmap-oracle");
    assert_eq!(vi3(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn verify_reports_failures_with_exit_1() {
    // an impossible Hausdorff constant makes the two-cycle suite fail
    let o = vi3(&["verify", "--suite", "two-cycle", "--set", "hausdorff_c=0.01"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("first failure in two-cycle"));
}

#[test]
fn two_cycle_sweep_has_count_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = vi3(&[
        "cycles", "--case", "saddle.3", "--set", "lambda_min=-4e-11", "--set", "lambda_max=-1e-11", "--set",
        "lambda_steps=16", "--set", "target_cycles=2", "--out", out, "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0][..4], ["lambda_tilde", "count", "returned", "unresolved"]);
    assert!(rows[1..].iter().any(|r| r[1] == "2"));
    let report: Value = serde_json::from_str(&read(dir.path(), "report.json")).unwrap();
    assert_eq!(report["cycles"].as_array().unwrap().len(), 2);
    assert_eq!(csv_rows(&read(dir.path(), "cycles.csv"))[0], ["cycle", "x", "y"]);
    assert!(read(dir.path(), "cycles.svg").contains("canard cycle"));
}

#[test]
fn missing_target_count_exits_1() {
    let o = vi3(&[
        "cycles", "--case", "saddle.3", "--set", "lambda_min=-4e-11", "--set", "lambda_max=-1e-11", "--set",
        "lambda_steps=16", "--set", "target_cycles=3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no unfolding value with 3 cycles"));
}

#[test]
fn single_cycle_case_stays_at_one() {
    let o = vi3(&[
        "cycles", "--case", "focus.4", "--set", "lambda_min=-1e-3", "--set", "lambda_max=1e-3", "--set",
        "lambda_steps=16", "--set", "n_scan=32", "--format", "csv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&stdout(&o));
    assert!(rows[1..].iter().all(|r| r[1].parse::<usize>().unwrap() <= 1));
}

#[test]
fn config_file_is_flat_and_strict() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("run.cfg");
    fs::write(&good, "# focus with tanh\ncase = focus.1\nphi = tanh\nalpha_plus = -0.75\n").unwrap();
    let o = vi3(&["classify", "--config", good.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(json(&o)["params"]["alpha_plus"], -0.75);

    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "case = focus.1\ncolour = red\n").unwrap();
    let o = vi3(&["classify", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown configuration key `colour`"));
}
