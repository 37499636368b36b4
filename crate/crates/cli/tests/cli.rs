//! End-to-end tests of the compiled binary: flag validation, exit codes,
//! report structure, and the documented command examples.

use std::path::Path;
use std::process::{Command, Output};

fn acf(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acf"))
        .args(args)
        .arg("--out")
        .arg(out_dir)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn rejects_invalid_links_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = acf(
        &[
            "acf",
            "--link",
            "circle:7.0",
            "--case",
            "halfspace:k1=1,k2=1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("circumference exceeds 2π"), "{err}");
}

#[test]
fn rejects_out_of_range_theta_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = acf(&["eigen", "--link", "sphere:3", "--theta", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("(0, π)"), "{err}");
}

#[test]
fn eigen_hemisphere_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = acf(
        &[
            "eigen",
            "--link",
            "sphere:4",
            "--cap",
            "1.5707963267948966",
            "--emit-eigenfunction",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = read_json(&dir.path().join("eigen_report.json"));
    let lambda = doc["payload"]["result"]["lambda"].as_f64().unwrap();
    assert!((lambda - 3.0).abs() <= 1e-8, "lambda {lambda}");
    // eigenfunction CSV: two columns, header + samples
    let csv = std::fs::read_to_string(dir.path().join("eigenfunction.csv")).unwrap();
    assert!(csv.starts_with("coordinate,value\n"));
    assert!(csv.lines().count() > 100);
}

#[test]
fn acf_halfspace_profile_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let out = acf(
        &[
            "acf",
            "--link",
            "sphere:3",
            "--case",
            "halfspace:k1=1,k2=1",
            "--r",
            "0.1:2:200",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("acf_profile.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "r,A1,A2,J,dA1,dA2,dlogJ,alpha1,alpha2,bound_slack"
    );
    let pi2 = std::f64::consts::PI.powi(2);
    let mut count = 0;
    for line in lines {
        let j: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!((j - pi2).abs() / pi2 <= 5e-3, "J = {j}");
        count += 1;
    }
    assert_eq!(count, 200);
}

#[test]
fn fh_scan_minimum_at_hemisphere() {
    let dir = tempfile::tempdir().unwrap();
    let out = acf(
        &["fh-scan", "--link", "sphere:3", "--theta", "0.2:2.9:50"],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = read_json(&dir.path().join("fh_scan_report.json"));
    let min_sum = doc["payload"]["min_sum"].as_f64().unwrap();
    let argmin = doc["payload"]["argmin_theta0"].as_f64().unwrap();
    let step = 2.7 / 49.0;
    assert!(min_sum >= 2.0 - 1e-6);
    assert!((argmin - std::f64::consts::FRAC_PI_2).abs() <= step + 1e-12);
    // sums never dip below 2 anywhere in the CSV
    let csv = std::fs::read_to_string(dir.path().join("fh_scan.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let deficit: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(deficit >= -1e-6, "{line}");
    }
}

#[test]
fn contract_violation_exits_1_with_failure_block() {
    let dir = tempfile::tempdir().unwrap();
    let out = acf(
        &[
            "acf",
            "--link",
            "sphere:3",
            "--case",
            "halfspace:k1=1,k2=1",
            "--r",
            "0.1:2:40",
            "--grid",
            "128,96",
            "--truncate",
            "0:0.8",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let start = stdout.find('{').expect("failure block printed");
    let block: serde_json::Value = serde_json::from_str(&stdout[start..]).unwrap();
    assert!(!block["failures"].as_array().unwrap().is_empty());
}

#[test]
fn report_config_reparses_to_equal_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = acf(
        &[
            "rigidity",
            "--link",
            "sphere:3",
            "--case",
            "halfspace:k1=1,k2=2",
            "--r",
            "0.1:2:40",
            "--grid",
            "128,96",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = read_json(&dir.path().join("rigidity_report.json"));
    // the echoed config deserializes and re-serializes identically
    let echoed = doc["config"].clone();
    let text = serde_json::to_string(&echoed).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(echoed, reparsed);
    assert_eq!(doc["schema"], "acf-report/1");
    assert_eq!(
        doc["payload"]["rigidity"]["verdict"].as_str().unwrap(),
        "half_sphere_decomposition"
    );
    // provenance carries timing; payload must not
    assert!(doc["provenance"]["wall_time_ms"].is_number());
    assert!(doc["payload"]["wall_time_ms"].is_null());
}

#[test]
fn emitted_field_bundle_has_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = acf(
        &[
            "acf",
            "--link",
            "sphere:3",
            "--case",
            "halfspace:k1=1,k2=1",
            "--r",
            "0.1:1:20",
            "--grid",
            "64,48",
            "--emit-fields",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    for name in [
        "u1_values.csv",
        "u1_radial_grad_sq.csv",
        "u2_tangential_grad_sq.csv",
        "u1_manifest.json",
    ] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let manifest = read_json(&dir.path().join("u2_manifest.json"));
    assert_eq!(manifest["radial_nodes"].as_u64(), Some(64));
}

#[test]
fn out_dir_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_acf"))
        .args([
            "eigen",
            "--link",
            "circle:6.283185307179586",
            "--arc",
            "3.141592653589793",
        ])
        .env("ACF_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("eigen_report.json").exists());
}
