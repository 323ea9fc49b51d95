//! End-to-end checks of the `cergm` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use constrained_ergm::StepGraphon;
use serde_json::Value;

fn cergm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cergm")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON payload")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cergm-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const BIPODAL: &str = r#"{"masses":[0.5,0.5],"values":[[0.2,0.8],[0.8,0.2]]}"#;
const TRIANGLE: &str = "3 3\n0 1\n1 2\n0 2\n";

#[test]
fn exit_codes() {
    let code = |args: &[&str]| cergm(args).status.code();
    assert_eq!(code(&[]), Some(1));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["critical"]), Some(1));
    assert_eq!(code(&["region", "--e", "0.5", "--bogus"]), Some(1));
    assert_eq!(code(&["entropy", "--e", "0.5", "--t", "0.4"]), Some(2));
    assert_eq!(code(&["region", "--e", "1.5"]), Some(2));
    assert_eq!(code(&["enumerate", "--n", "9"]), Some(4));
    assert_eq!(code(&["enumerate", "--n", "3", "--e", "0.5", "--alpha", "0.01"]), Some(5));
    assert_eq!(code(&["region", "--e", "0.5"]), Some(0));
}

#[test]
fn failures_write_nothing_to_stdout() {
    let out = cergm(&["entropy", "--e", "0.5", "--t", "0.4"]);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn json_carries_meta() {
    let v = json(&cergm(&["region", "--e", "0.5"]));
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["meta"]["invocation"], serde_json::json!(["region", "--e", "0.5"]));
    assert_eq!(v["t_min"], 0.0);
}

#[test]
fn reals_have_twelve_significant_digits() {
    let v = json(&cergm(&["entropy", "--e", "0.5", "--t", "0.1"]));
    let s = v["s"].as_f64().unwrap();
    assert_eq!(s, 0.255378532474);
    assert_eq!(format!("{:.11e}", s).parse::<f64>().unwrap(), s);
}

#[test]
fn csv_headers_are_stable() {
    let header = |args: &[&str]| {
        let out = cergm(args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap().lines().next().unwrap().to_string()
    };
    assert_eq!(
        header(&["s-curve", "--e", "0.5", "--t-min", "0", "--t-max", "0.125", "--steps", "4"]),
        "e,t,s,c,p11,p12,p22"
    );
    assert_eq!(
        header(&["phase-scan", "--e", "0.5", "--beta2-from", "0", "--beta2-to", "-5", "--steps", "10"]),
        "beta2,psi,t_star,eps_star"
    );
    assert_eq!(
        header(&["critical-curve", "--e-from", "0.4", "--e-to", "0.5", "--steps", "1"]),
        "e,beta2_c,t_c,eps_c,conjectural,error"
    );
    let g = scratch("csv-bipodal.json", BIPODAL);
    assert_eq!(header(&["sample", "--graphon", s(&g), "--n", "20", "--stats", "--reps", "3"]), "seed,e,t");
}

#[test]
fn phase_scan_rows_match_grid() {
    let out = cergm(&["phase-scan", "--e", "0.5", "--beta2-from", "0", "--beta2-to", "-5", "--steps", "100"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 101);
    assert_eq!(rows[0][2].parse::<f64>().unwrap(), 0.125);
    assert!(rows[100][2].parse::<f64>().unwrap() < 0.03);
}

#[test]
fn format_switch() {
    let v = json(&cergm(&[
        "--format",
        "json",
        "phase-scan",
        "--e",
        "0.5",
        "--beta2-from",
        "-1",
        "--beta2-to",
        "-4",
        "--steps",
        "3",
    ]));
    assert!(v["meta"].is_object());
    let out = cergm(&["--format", "csv", "region", "--e", "0.5"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().next().unwrap(), "t_min,t_max");
}

#[test]
fn sampling_is_deterministic() {
    let g = scratch("det-bipodal.json", BIPODAL);
    let a = cergm(&["sample", "--graphon", s(&g), "--n", "50", "--seed", "7"]);
    let b = cergm(&["sample", "--graphon", s(&g), "--n", "50", "--seed", "7"]);
    let c = cergm(&["--threads", "1", "sample", "--graphon", s(&g), "--n", "50", "--seed", "8"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let graph: constrained_ergm::SimpleGraph = text.parse().unwrap();
    assert_eq!(graph.n_vertices(), 50);
}

#[test]
fn out_file_receives_payload() {
    let path = std::env::temp_dir().join(format!("cergm-cli-{}-out.json", std::process::id()));
    let out = cergm(&["--out", path.to_str().unwrap(), "critical", "--e", "0.5"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["beta2_c"], -2.68833914413);
    fs::remove_file(path).unwrap();
}

#[test]
fn el_solve_graphon_round_trips() {
    let h2 = scratch("triangle.txt", TRIANGLE);
    let dir = std::env::temp_dir().join(format!("cergm-cli-{}", std::process::id()));
    let first = dir.join("el-first.json");
    let v = json(&cergm(&[
        "el-solve",
        "--beta1",
        "0.4",
        "--beta2",
        "-1.5",
        "--h2",
        s(&h2),
        "--blocks",
        "2",
        "--graphon-out",
        first.to_str().unwrap(),
    ]));
    assert_eq!(v["converged"], true);
    let h = StepGraphon::from_json(&fs::read_to_string(&first).unwrap()).unwrap();
    assert_eq!(serde_json::to_value(&h).unwrap(), v["graphon"]);

    // restarting at the fixed point converges immediately
    let again = json(&cergm(&[
        "el-solve",
        "--beta1",
        "0.4",
        "--beta2",
        "-1.5",
        "--h2",
        s(&h2),
        "--blocks",
        "2",
        "--init",
        first.to_str().unwrap(),
    ]));
    assert_eq!(again["iterations"], 0);
}

#[test]
fn density_and_cutnorm() {
    let a = scratch("dens-a.json", BIPODAL);
    let b = scratch("dens-b.json", r#"{"masses":[1.0],"values":[[0.5]]}"#);
    let pattern = scratch("dens-k3.txt", TRIANGLE);
    let v = json(&cergm(&["density", "--graphon", s(&a), "--pattern", s(&pattern)]));
    assert_eq!(v["edge_density"], 0.5);
    assert_eq!(v["triangle_density"], 0.098);
    assert_eq!(v["hom_density"], 0.098);
    let c = json(&cergm(&["cutnorm", "--a", s(&a), "--b", s(&b)]));
    assert_eq!(c["cut_norm"], 0.075);
    assert_eq!(c["cut_distance_upper"], 0.075);
}

#[test]
fn single_point_critical_curve() {
    let out = cergm(&["critical-curve", "--e-from", "0.5", "--e-to", "0.5", "--steps", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("0.5,-2.68833914413,"));
    assert_eq!(cergm(&["critical-curve", "--e-from", "0.4", "--e-to", "0.5", "--steps", "0"]).status.code(), Some(1));
}

#[test]
fn enumeration_values() {
    let v = json(&cergm(&["enumerate", "--n", "3"]));
    assert_eq!(v["psi"], 0.231049060187);
    let v = json(&cergm(&["enumerate", "--n", "4", "--e", "0.5", "--alpha", "0.1"]));
    assert_eq!(v["graph_count"], 15);
}
