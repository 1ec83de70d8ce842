mod common;

use std::f64::consts::PI;
use std::process::Command;

use common::data;
use gaussmap::cli::{format_g17, run};
use serde_json::Value;

fn json_run(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["gaussmap".to_string()];
    full.extend(args.iter().map(|a| a.to_string()));
    let out = run(full);
    let v: Value = serde_json::from_str(out.stdout.trim()).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (out.code, v)
}

fn path(name: &str) -> String {
    data(name).display().to_string()
}

#[test]
fn winding_report_fields() {
    let (code, v) = json_run(&["winding", &path("limacon.man")]);
    assert_eq!(code, 0);
    assert_eq!(v["k"], -2);
    assert_eq!(v["turning"], 2);
    assert_eq!(v["converged"], true);
    for key in ["raw", "normalized", "residual", "cross_checks", "trace", "settings"] {
        assert!(!v[key].is_null(), "missing {key}");
    }
    assert_eq!(v["experimental"], false);
    assert!(v["trace"].as_array().unwrap().len() >= 2);
}

#[test]
fn gauss_degree_and_euler() {
    let (code, v) = json_run(&["gauss-degree", &path("sphere.man")]);
    assert_eq!(code, 0);
    assert_eq!(v["k"], 1);
    assert_eq!(v["chi"], 2);
    assert!((v["raw"].as_f64().unwrap() - 4.0 * PI).abs() < 1e-8);
    assert!(v["cross_checks"]["dual_path_difference"].as_f64().unwrap().abs() < 1e-12);
    let (code, v) = json_run(&["euler", &path("torus.man")]);
    assert_eq!(code, 0);
    assert_eq!(v["chi"], 0);
}

#[test]
fn power_of_two_normalization_changes_constant_only() {
    let (_, a) = json_run(&["gauss-degree", &path("sphere.man")]);
    let (_, b) = json_run(&["--norm", "paper", "gauss-degree", &path("sphere.man")]);
    assert_eq!(a["raw"], b["raw"]);
    assert!((b["norm_constant"].as_f64().unwrap() - 4.0 * PI).abs() < 1e-15);
    let (_, c) = json_run(&["--norm", "paper", "winding", &path("circle.man")]);
    assert_eq!(c["k"], -1);
}

#[test]
fn kaehler_and_projective() {
    let (code, v) = json_run(&["kaehler", &path("product_torus.man")]);
    assert_eq!(code, 0);
    assert!(v["raw"].as_f64().unwrap().abs() < 1e-8);
    assert!(v["k"].is_null());
    let (_, v) = json_run(&["kaehler", "--certify", &path("product_torus.man")]);
    assert_eq!(v["k"], 0);
    let (code, v) = json_run(&["projective", "--alpha", "1,2,3", &path("affine_circle.man")]);
    assert_eq!(code, 0);
    assert_eq!(v["k"][0], 1);
    assert!((v["weighted_total"].as_f64().unwrap() - 2.0 * PI).abs() < 1e-8);
    let (code, v) = json_run(&["projective", "--alpha", "1,2", &path("affine_circle.man")]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "Precondition");
}

#[test]
fn form_from_manifest_and_flag() {
    let (code, a) = json_run(&["form", &path("sphere_form.man")]);
    assert_eq!(code, 0);
    assert_eq!(a["k"], 1);
    let (code, b) = json_run(&["form", &path("sphere.man"), "--spec", &path("canonical2.form")]);
    assert_eq!(code, 0);
    assert_eq!(a["raw"], b["raw"]);
}

#[test]
fn mesh_commands() {
    let (code, v) = json_run(&["mesh-total", &path("icosahedron.off")]);
    assert_eq!(code, 0);
    assert_eq!((v["kappa"].as_i64(), v["chi"].as_i64()), (Some(1), Some(2)));
    assert_eq!(v["per_vertex"].as_array().unwrap().len(), 12);
    let (_, v) = json_run(&["mesh-total", &path("pentagram.json")]);
    assert_eq!(v["kappa"], 2);
    let (code, v) = json_run(&["mesh-vertex", &path("cube.off"), "--vertex", "3"]);
    assert_eq!(code, 0);
    assert!((v["exterior_angle"].as_f64().unwrap() - PI / 2.0).abs() < 1e-12);
    let (code, v) = json_run(&["mesh-total", &path("simplex4.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["experimental"], true);
    assert_eq!(v["certifications"].as_array().unwrap().len(), 2);
    let (code, v) = json_run(&["mesh-vertex", &path("cube.off"), "--vertex", "99"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "IndexOutOfRange");
}

#[test]
fn computation_errors_carry_location() {
    let (code, v) = json_run(&["gauss-degree", &path("sphere_pole.man")]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "DegenerateJacobian");
    assert_eq!(v["error"]["location"], serde_json::json!([0.0, 0.0]));
    let (code, v) = json_run(&["winding", &path("cusp.man")]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["location"], serde_json::json!([0.0]));
    let (code, v) = json_run(&["winding", "/nonexistent/x.man"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "Io");
}

#[test]
fn usage_errors_exit_two() {
    for args in [vec![], vec!["frobnicate"], vec!["winding"], vec!["--norm", "cubic", "winding", "a"]] {
        let (code, v) = json_run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(v["error"]["code"], "Usage");
    }
    let mut help = vec!["gaussmap".to_string(), "--help".to_string()];
    assert_eq!(run(help.clone()).code, 0);
    help[1] = "--version".into();
    assert_eq!(run(help).code, 0);
}

#[test]
fn density_dump_rows_sum_to_rule_value() {
    let dir = tempfile::tempdir().unwrap();
    for (name, grid) in [("sphere.man", 24), ("limacon.man", 64), ("torus.man", 16)] {
        let out = dir.path().join(format!("{name}.csv"));
        let (code, v) = json_run(&["density-dump", &path(name), "--grid", &grid.to_string(), "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0, "{v}");
        let text = std::fs::read_to_string(&out).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("t1,") && header.ends_with(",density"));
        let dens: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
        assert_eq!(dens.len() as u64, v["rows"].as_u64().unwrap());
        let sum: f64 = dens.iter().sum::<f64>() * v["cell_volume"].as_f64().unwrap();
        let rule = v["rule_value"].as_f64().unwrap();
        assert!((sum - rule).abs() < 1e-12 * rule.abs().max(1.0), "{sum} vs {rule}");
    }
}

#[test]
fn density_dump_alternate_density() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    json_run(&["density-dump", &path("sphere.man"), "--grid", "8", "--out", a.to_str().unwrap()]);
    let (code, _) = json_run(&[
        "density-dump", &path("sphere.man"), "--grid", "8", "--out", b.to_str().unwrap(), "--density", "gauss_bonnet",
    ]);
    assert_eq!(code, 0);
    let parse = |p: &std::path::Path| -> Vec<f64> {
        std::fs::read_to_string(p).unwrap().lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect()
    };
    for (x, y) in parse(&a).iter().zip(parse(&b)) {
        assert!((x - y).abs() < 1e-14);
    }
}

#[test]
fn g17_round_trips() {
    for x in [PI, -1e-300, 1.0 / 3.0, 6.02214076e23, 1.0, 100.0, 1e17, 5e-324] {
        assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
    }
    assert_eq!(format_g17(1.0), "1");
    assert_eq!(format_g17(0.5), "0.5");
    assert_eq!(format_g17(1e20), "1e+20");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_gaussmap");
    let ok = Command::new(bin).args(["winding", &path("circle.man")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["k"], -1);
    let err = Command::new(bin).args(["winding", &path("cusp.man")]).output().unwrap();
    assert_eq!(err.status.code(), Some(1));
    let usage = Command::new(bin).arg("bogus").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
