use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nnts-axial"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Deterministic angles on [0, π) with a mild two-mode structure.
fn write_angles(dir: &Path, name: &str, n: usize, phase: f64) -> PathBuf {
    let text: String = (0..n)
        .map(|i| {
            let u = (i as f64 + 0.5) / n as f64;
            let t = PI * u + 0.3 * (2.0 * PI * u).sin() + phase;
            format!("{}\n", t.rem_euclid(PI))
        })
        .collect();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn version_and_help_exit_zero() {
    let out = run(&["--version"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(env!("CARGO_PKG_VERSION")));
    assert!(text.contains("document format 1"));
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["fit", "--help"])), 0);
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["fit", "x.txt"])), 1);
    assert_eq!(code(&run(&["fit", "x.txt", "--m", "1", "--unit", "grads"])), 1);
    assert_eq!(code(&run(&["bogus"])), 1);
}

#[test]
fn uniform_fit_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_angles(dir.path(), "a.txt", 133, 0.0);
    let out = run(&["fit", s(&f), "--m", "0"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    let ll = doc["loglik"].as_f64().unwrap();
    assert_eq!((ll * 100.0).round() / 100.0, -152.25);
    assert_eq!(doc["stop_reason"], "closed_form");
}

#[test]
fn fit_is_deterministic_and_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_angles(dir.path(), "a.txt", 120, 0.2);
    let a = run(&["fit", s(&f), "--m", "1", "--seed", "7"]);
    let b = run(&["fit", s(&f), "--m", "1", "--seed", "7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let target = dir.path().join("fit.json");
    let c = run(&["fit", s(&f), "--m", "1", "--seed", "7", "--out", s(&target)]);
    assert_eq!(code(&c), 0);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), a.stdout);
}

#[test]
fn small_sample_warning() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_angles(dir.path(), "a.txt", 10, 0.0);
    let out = run(&["fit", s(&f), "--m", "3"]);
    assert_eq!(code(&out), 0);
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("warning") && err.contains("21"), "{err}");
    let doc = json(&out);
    assert_eq!(doc["small_sample_warning"], true);
    assert!(!doc["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0.1\n0.2\nnot-a-number\n").unwrap();
    let out = run(&["fit", s(&bad), "--m", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "# nothing\n").unwrap();
    assert_eq!(code(&run(&["fit", s(&empty), "--m", "1"])), 2);
    assert_eq!(code(&run(&["fit", s(&dir.path().join("missing")), "--m", "1"])), 2);

    let raw = dir.path().join("raw.txt");
    std::fs::write(&raw, "3.5\n").unwrap();
    assert_eq!(code(&run(&["fit", s(&raw), "--m", "0", "--convention", "raw-0-pi"])), 2);

    let params = dir.path().join("p.json");
    std::fs::write(&params, r#"{"format": "nnts-axial-params/1", "M": 0, "v": [[0.5, 0]]}"#).unwrap();
    assert_eq!(code(&run(&["moments", "--params", s(&params)])), 2);
}

#[test]
fn degrees_need_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("deg.txt");
    std::fs::write(&f, "10\n100\n170\n190\n").unwrap();
    let rad = json(&run(&["fit", s(&f), "--m", "0", "--convention", "axial-mod-pi"]));
    let deg = json(&run(&["fit", s(&f), "--m", "0", "--unit", "degrees"]));
    assert_eq!(rad["n"], 4);
    assert_eq!(deg["n"], 4);
}

#[test]
fn scan_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_angles(dir.path(), "a.txt", 200, 0.0);
    let out = run(&["scan", s(&f), "--m-max", "3"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        let m = r["M"].as_f64().unwrap();
        let ll = r["loglik"].as_f64().unwrap();
        assert!((r["aic"].as_f64().unwrap() - (-2.0 * ll + 4.0 * m)).abs() < 1e-9);
        assert!((r["bic"].as_f64().unwrap() - (-2.0 * ll + 2.0 * m * 200f64.ln())).abs() < 1e-9);
    }
    let one = json(&run(&["scan", s(&f), "--m-max", "0"]));
    assert_eq!(one["rows"].as_array().unwrap().len(), 1);

    let table = String::from_utf8(run(&["scan", s(&f), "--m-max", "2", "--format", "table"]).stdout).unwrap();
    assert_eq!(table.matches('*').count(), 2);
}

#[test]
fn homogeneity_from_reported_logliks() {
    let out = run(&[
        "test",
        "homogeneity",
        "--m-per",
        "1,3,6",
        "--m-pooled",
        "4",
        "--from-logliks",
        "-275.77,-2.41,-18.43,-361.87",
    ]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert!((doc["statistic"].as_f64().unwrap() - 130.52).abs() < 0.02);
    assert_eq!(doc["df"], 12);
    let p = doc["p_value"].as_f64().unwrap();
    assert!((4.0e-22..=6.0e-22).contains(&p));
    assert!((doc["log10_p"].as_f64().unwrap() - p.log10()).abs() < 1e-9);
}

#[test]
fn single_tests_from_reported_logliks() {
    let out = run(&["test", "symmetry", "--m", "3", "--from-logliks", "-65.12,-64.62"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["df"], 2);
    assert!((doc["p_value"].as_f64().unwrap() - (-0.5f64).exp()).abs() < 1e-12);

    let out = run(&["test", "nested", "--m-restricted", "1", "--m", "2", "--from-logliks", "-65.12,-64.62"]);
    assert_eq!(json(&out)["df"], 2);
    // Reversed order is a usage error.
    assert_eq!(code(&run(&["test", "uniformity", "--m", "1", "--from-logliks", "-60,-70"])), 1);
    assert_eq!(code(&run(&["test", "uniformity", "--m", "1", "--from-logliks", "-60"])), 1);
}

#[test]
fn test_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_angles(dir.path(), "a.txt", 50, 0.0);
    assert_eq!(code(&run(&["test", "symmetry", "--input", s(&f), "--m", "1"])), 1);
    assert_eq!(code(&run(&["test", "uniformity", "--input", s(&f), "--m", "0"])), 1);
    assert_eq!(
        code(&run(&["test", "homogeneity", "--input", s(&f), "--m-per", "1,1", "--m-pooled", "1"])),
        1
    );
    assert_eq!(
        code(&run(&["test", "homogeneity", "--input", s(&f), "--input", s(&f), "--m-per", "1,1", "--m-pooled", "2"])),
        1
    );
}

#[test]
fn duplicated_inputs_are_homogeneous() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_angles(dir.path(), "a.txt", 150, 0.4);
    let out = run(&["test", "homogeneity", "--input", s(&f), "--input", s(&f), "--m-per", "2,2", "--m-pooled", "2"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert!(doc["p_value"].as_f64().unwrap() > 0.99);
    assert_eq!(doc["general_fits"].as_array().unwrap().len(), 2);
}

#[test]
fn fitted_tests_run() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_angles(dir.path(), "a.txt", 150, 0.4);
    for args in [
        vec!["test", "uniformity", "--input", s(&f), "--m", "2"],
        vec!["test", "symmetry", "--input", s(&f), "--m", "2"],
        vec!["test", "nested", "--input", s(&f), "--m-restricted", "1", "--m", "2"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 0, "{args:?}");
        let doc = json(&out);
        assert!(doc["statistic"].as_f64().unwrap() >= 0.0);
        assert_eq!(doc["restricted_fits"].as_array().unwrap().len(), 1);
    }
}

#[test]
fn params_commands() {
    let dir = tempfile::tempdir().unwrap();
    let uniform = dir.path().join("u.json");
    std::fs::write(&uniform, r#"{"format": "nnts-axial-params/1", "M": 0, "v": [[1, 0]]}"#).unwrap();

    let m = json(&run(&["moments", "--params", s(&uniform), "--max-r", "4"]));
    let moments = m["moments"].as_array().unwrap();
    assert_eq!(moments.len(), 5);
    assert_eq!(moments[2]["re"], 0.0);
    assert_eq!(moments[2]["im"], 0.0);

    let csv = String::from_utf8(run(&["density", "--params", s(&uniform), "--grid", "8"]).stdout).unwrap();
    let densities: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(densities.len(), 8);
    assert!(densities.iter().all(|d| (d - 1.0 / PI).abs() < 1e-15));
}

#[test]
fn sample_then_fit_recovers_moments() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("p.json");
    let a = (0.5f64).sqrt();
    std::fs::write(
        &params,
        format!(r#"{{"format": "nnts-axial-params/1", "M": 2, "v": [[{a}, 0], [0.5, 0.3], [0.1, -{}]]}}"#, (0.5f64 - 0.34 - 0.01).sqrt()),
    )
    .unwrap();
    let angles = dir.path().join("s.txt");
    let out = run(&["sample", "--params", s(&params), "--n", "100000", "--seed", "5", "--out", s(&angles)]);
    assert_eq!(code(&out), 0);
    let again = run(&["sample", "--params", s(&params), "--n", "100000", "--seed", "5"]);
    assert_eq!(std::fs::read(&angles).unwrap(), again.stdout);

    let fit = json(&run(&["fit", s(&angles), "--m", "2", "--restarts", "5"]));
    let fitted = dir.path().join("fit_params.json");
    std::fs::write(&fitted, serde_json::to_string(&fit["params"]).unwrap()).unwrap();
    let truth = json(&run(&["moments", "--params", s(&params)]));
    let est = json(&run(&["moments", "--params", s(&fitted)]));
    for r in [2usize, 4] {
        let dr = truth["moments"][r]["re"].as_f64().unwrap() - est["moments"][r]["re"].as_f64().unwrap();
        let di = truth["moments"][r]["im"].as_f64().unwrap() - est["moments"][r]["im"].as_f64().unwrap();
        assert!(dr.hypot(di) < 0.05, "r = {r}");
    }
}
