use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dimscale_cli::{compare_curves, read_curve_csv, sig9};

fn dimscale(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimscale"))
        .args(args)
        .env_remove("DIMSCALE_RESTARTS")
        .output()
        .expect("binary runs")
}

fn fci_reference() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/h2_fci_ccpvtz.csv")
}

#[test]
fn unknown_element_is_an_argument_error() {
    let out = dimscale(&["atom", "--element", "xx"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("xx"));
}

#[test]
fn bad_grid_is_an_argument_error() {
    assert_eq!(dimscale(&["h2-curve", "--r-min", "3", "--r-max", "1"]).status.code(), Some(2));
    assert_eq!(dimscale(&["h2-curve", "--points", "1"]).status.code(), Some(2));
}

#[test]
fn unwritable_output() {
    let out = dimscale(&["h2-curve", "--points", "2", "-o", "/nonexistent/dir/curve.csv"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn malformed_reference_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "R,E\n1.0,-1.1\n1.5,oops\n").unwrap();
    let out = dimscale(&["compare", "--reference", path.to_str().unwrap(), "--points", "2"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn disjoint_ranges_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("far.csv");
    std::fs::write(&path, "R,E\n20,-1.0\n30,-1.0\n").unwrap();
    let out = dimscale(&["compare", "--reference", path.to_str().unwrap(), "--points", "2"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn two_point_curve() {
    let out = dimscale(&["h2-curve", "--r-min", "1", "--r-max", "2", "--points", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "R,eps1_scaled,epsinf_scaled,eps3,binding");
    for line in &lines[1..] {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(v.len(), 5);
        assert!((v[4] - v[3] - 1.0 / v[0]).abs() < 1e-8, "{line}");
    }
    assert!(lines[2].starts_with("2.0"));
}

#[test]
fn output_is_deterministic() {
    let args = ["h2-curve", "--points", "6", "--seed", "7"];
    assert_eq!(dimscale(&args).stdout, dimscale(&args).stdout);
    let atom = ["atom", "--element", "li", "--format", "json"];
    assert_eq!(dimscale(&atom).stdout, dimscale(&atom).stdout);
}

#[test]
fn atom_json_report() {
    let out = dimscale(&["atom", "--element", "He", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["epsinf"].as_f64().unwrap() + 0.684442).abs() < 1e-5);
    assert!((v["eps3"]["exact"].as_f64().unwrap() + 0.725778).abs() < 1e-5);
}

#[test]
fn curve_compared_with_itself() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.csv");
    let out = dimscale(&["h2-curve", "--points", "12", "-o", curve.to_str().unwrap()]);
    assert!(out.status.success());

    let rows = read_curve_csv(&curve).unwrap();
    let same = compare_curves(&rows, &rows).unwrap();
    assert_eq!(same.rmse, 0.0);
    assert_eq!(same.n_points_compared, 12);

    let shifted: Vec<(f64, f64)> = rows.iter().map(|&(r, e)| (r, e - 0.01)).collect();
    let off = compare_curves(&rows, &shifted).unwrap();
    assert!((off.rmse - 0.01).abs() < 1e-12 && (off.max_abs_err - 0.01).abs() < 1e-12);

    let json = dimscale(&[
        "compare",
        "--reference",
        curve.to_str().unwrap(),
        "--curve",
        curve.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["rmse"].as_f64(), Some(0.0));
    assert_eq!(v["interpolation_method_for_grid_mismatch"], "linear");
}

#[test]
fn bundled_reference_comparison() {
    let reference = read_curve_csv(&fci_reference()).unwrap();
    assert_eq!(reference.len(), 57);
    let out = dimscale(&["compare", "--reference", fci_reference().to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rmse = v["rmse"].as_f64().unwrap();
    println!("binding curve vs bundled FCI: rmse {rmse:.4} hartree, max {:.4}", v["max_abs_err"]);
    assert!(rmse.is_finite() && v["n_points_compared"].as_u64() == Some(56));
}

#[test]
fn nine_significant_digits() {
    assert_eq!(sig9(-1.17233459), "-1.17233459");
    assert_eq!(sig9(12.5), "12.5000000");
    assert_eq!(sig9(0.0012345), "0.00123450000");
    assert_eq!(sig9(123456789.4), "123456789");
}
