use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn squaremap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squaremap")).args(args).output().expect("binary runs")
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn param_sphere_succeeds_without_folds() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = path(dir.path(), "icosphere.obj");
    assert!(squaremap(&["gen", "icosphere", "--subdiv", "3", "--out", s(&mesh)]).status.success());
    let map = path(dir.path(), "map.obj");
    let report = path(dir.path(), "traj.csv");
    let o = squaremap(&["param", "--input", s(&mesh), "--genus", "0", "--out", s(&map), "--report", s(&report)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = json(&o.stdout);
    assert_eq!(summary["folds_after"], 0);
    assert_eq!(summary["genus"], 0);
    assert!(summary.get("time_secs").is_none());
    let csv = std::fs::read_to_string(&report).unwrap();
    assert!(csv.starts_with("iter,stretch_energy,authalic_energy"));
    assert_eq!(csv.lines().count() as u64, summary["iterations"].as_u64().unwrap() + 2);

    let img = path(dir.path(), "img.png");
    let o = squaremap(&["gimg", "encode", "--map", s(&map), "--n", "64", "--out", s(&img)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let meta = json(&o.stdout);
    assert_eq!(meta["fallback_pixels"], 0);
    assert_eq!(meta["n"], 64);
    let back = path(dir.path(), "back.obj");
    let o = squaremap(&["gimg", "decode", "--in", s(&img), "--out", s(&back)]);
    assert!(o.status.success());
    let d = json(&o.stdout);
    assert_eq!(d["welded"], true);
    assert_eq!(d["closed"], true);
    assert_eq!(d["euler_characteristic"], 2);
}

#[test]
fn genus_one_needs_loops() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = path(dir.path(), "torus.obj");
    assert!(squaremap(&["gen", "torus", "--out", s(&mesh)]).status.success());
    let o = squaremap(&["param", "--input", s(&mesh), "--genus", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = json(&o.stderr);
    assert_eq!(err["error"], "usage");
    assert!(err["message"].as_str().unwrap().contains("loops"));
}

#[test]
fn runtime_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "open.obj");
    std::fs::write(&bad, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n").unwrap();
    let o = squaremap(&["param", "--input", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o.stderr)["error"], "runtime");
    let o = squaremap(&["param", "--input", s(&path(dir.path(), "missing.obj"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn torus_with_loops_and_angle_correction() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = path(dir.path(), "torus.obj");
    let loops = path(dir.path(), "loops.txt");
    assert!(squaremap(&["gen", "torus", "--nu", "16", "--nv", "16", "--out", s(&mesh), "--loops", s(&loops)]).status.success());
    let o = squaremap(&["param", "--input", s(&mesh), "--genus", "1", "--loops", s(&loops), "--rho", "const"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = json(&o.stdout);
    assert_eq!(summary["measure"], "const");
    assert_eq!(summary["folds_after"], 0);

    let img = path(dir.path(), "img.f32");
    let o = squaremap(&[
        "gimg", "correct", "--input", s(&mesh), "--genus", "1", "--loops", s(&loops), "--n", "48", "--format", "f32",
        "--out", s(&img),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o.stdout);
    assert!(v["max_mu_after"].as_f64().unwrap() <= 0.85);
    assert_eq!(v["folds"], 0);
    let back = path(dir.path(), "back.obj");
    let d = json(&squaremap(&["gimg", "decode", "--in", s(&img), "--out", s(&back)]).stdout);
    assert_eq!(d["euler_characteristic"], 0);
    assert_eq!(d["closed"], true);
}
