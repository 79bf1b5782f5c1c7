use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn nnlif(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nnlif"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn grid(t_max: f64, dt: f64) -> Value {
    json!({
        "v_min": -4.0, "v_F": 2.0, "v_R": 1.0,
        "w_min": -1.1, "w_max": 0.1,
        "t_max": t_max, "dv": 0.1, "dw": 0.01, "dt": dt
    })
}

fn coefficients() -> Value {
    json!({
        "a": 1.0,
        "epsilon": 0.5,
        "input": { "kind": "constant", "value": 0.0 },
        "learning": { "kind": "indicator", "value": -1.0, "threshold": 0.0 },
        "firing": { "kind": "identity" }
    })
}

fn run_config(t_max: f64, dt: f64) -> Value {
    json!({
        "grid": grid(t_max, dt),
        "coefficients": coefficients(),
        "initial": {
            "kind": "product_sine_window",
            "v_lo": -1.0, "v_hi": 1.0, "w_lo": -1.0, "w_hi": 0.0,
            "normalize": true
        },
        "output": { "stride": 5, "snapshot_times": [t_max] },
        "campaign": { "kind": "run" }
    })
}

fn write(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_owned()
}

#[test]
fn missing_config_exits_2() {
    let out = nnlif(&["run", "--config", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not found"));
}

#[test]
fn run_without_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = nnlif(&["run", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_config_reports_every_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = run_config(0.01, 1e-3);
    cfg["grid"]["v_R"] = json!(1.05);
    cfg["coefficients"]["a"] = json!(-1.0);
    let path = write(dir.path(), "bad.json", &cfg);
    let out = nnlif(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("grid.v_R"), "{err}");
    assert!(err.contains("coefficients.a"), "{err}");
}

#[test]
fn campaign_kind_must_match_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "run.json", &run_config(0.01, 1e-3));
    let out = nnlif(&["orders", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("campaign.kind"));
}

#[test]
fn cfl_abort_exits_3_with_step() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "cfl.json", &run_config(0.5, 0.05));
    let out = nnlif(&[
        "run",
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("step 1"), "{}", stderr(&out));
}

#[test]
fn run_writes_documented_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "run.json", &run_config(0.02, 1e-3));
    let out_dir = dir.path().join("out");
    let out = nnlif(&[
        "run",
        "--config",
        path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--dump-matrices",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(
        header(&out_dir.join("trajectory.csv")),
        "step,t,Nbar,mass,min_p,w_support_left,w_support_right"
    );
    assert_eq!(header(&out_dir.join("profile.csv")), "w,N,H");
    assert_eq!(header(&out_dir.join("snapshot_20.csv")), "v,w,p");
    assert_eq!(header(&out_dir.join("matrices.csv")), "column,row,col,value");
    let rows = fs::read_to_string(out_dir.join("trajectory.csv"))
        .unwrap()
        .lines()
        .count();
    assert_eq!(rows, 1 + 5);
    let summary: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(summary["summary"]["steps"], 20);
    assert!(summary["summary"]["max_relative_mass_drift"].as_f64().unwrap() < 1e-12);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "run.json", &run_config(0.01, 1e-3));
    let dirs = ["a", "b"].map(|d| dir.path().join(d));
    for d in &dirs {
        let out = nnlif(&[
            "run",
            "--config",
            path.to_str().unwrap(),
            "--out",
            d.to_str().unwrap(),
            "--threads",
            "2",
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    for name in ["trajectory.csv", "profile.csv", "snapshot_10.csv", "summary.json"] {
        assert_eq!(
            fs::read(dirs[0].join(name)).unwrap(),
            fs::read(dirs[1].join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn steady_writes_profile_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let h: Vec<f64> = (0..=120)
        .map(|j| if (10..=110).contains(&j) { 1.0 } else { 0.0 })
        .collect();
    let cfg = json!({
        "grid": grid(0.0, 1e-3),
        "coefficients": coefficients(),
        "campaign": { "kind": "steady", "h": h }
    });
    let path = write(dir.path(), "steady.json", &cfg);
    let out_dir = dir.path().join("out");
    let out = nnlif(&[
        "steady",
        "--config",
        path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(header(&out_dir.join("profile.csv")), "w,N,H");
    assert_eq!(header(&out_dir.join("trace.csv")), "k,Nbar");
    let doc: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("steady.json")).unwrap()).unwrap();
    assert_eq!(doc["converged"], true);
    assert_eq!(doc["campaign"], "steady");
}

#[test]
fn orders_writes_json_and_six_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({ "campaign": { "kind": "orders", "horizons": [0.004, 0.008], "levels": 3 } });
    let path = write(dir.path(), "tables.json", &cfg);
    let out_dir = dir.path().join("out");
    let out = nnlif(&[
        "orders",
        "--config",
        path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csvs: Vec<_> = fs::read_dir(&out_dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "csv"))
        .collect();
    assert_eq!(csvs.len(), 6);
    assert_eq!(
        header(&out_dir.join("orders_v_T0.004.csv")),
        "h,l1_diff,l2_diff,l1_order,l2_order"
    );
    let doc: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("orders.json")).unwrap()).unwrap();
    assert_eq!(doc["studies"].as_array().unwrap().len(), 6);
}
