use std::path::PathBuf;
use std::process::{Command, Output};

fn geolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geolab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("geolab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn lists_examples() {
    let o = geolab(&["list-examples"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["tree:L", "doubled:L", "circle-rose:L", "rotation-t4", "tufted-ray:RULE:H"] {
        assert!(text.contains(name), "{text}");
    }
}

#[test]
fn build_then_run_from_file() {
    let desc = scratch("doubled.json");
    assert!(geolab(&["build", "--example", "doubled:2", "--out", desc.to_str().unwrap()]).status.success());
    let o = geolab(&["run", "--space", desc.to_str().unwrap(), "--quantity", "sft", "--window", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["values"]["entropy"].as_f64().unwrap() - 6f64.ln()).abs() < 1e-12);
}

#[test]
fn run_writes_csv_deterministically() {
    let out = scratch("hcrit.csv");
    let args = [
        "run", "--space", "tree:2", "--quantity", "hcrit", "--horizon", "8", "--format", "csv", "--out",
        out.to_str().unwrap(),
    ];
    assert!(geolab(&args).status.success());
    let first = std::fs::read_to_string(&out).unwrap();
    assert!(geolab(&args).status.success());
    assert_eq!(first, std::fs::read_to_string(&out).unwrap());
    let lines: Vec<&str> = first.lines().collect();
    assert!(lines[0].starts_with("quantity,horizon,count_lo,count_hi"));
    assert_eq!(lines.len(), 9);
}

#[test]
fn config_file_and_flag_override() {
    let cfg = scratch("bowen.json");
    std::fs::write(&cfg, r#"{"space": "tree:2", "quantity": "bowen", "horizons": [1, 2, 3], "r": "1/3", "a": 1.0}"#).unwrap();
    let o = geolab(&["run", "--config", cfg.to_str().unwrap(), "--decay", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["a"], 2.0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_codes() {
    // incomplete config
    assert_eq!(geolab(&["run", "--space", "tree:2", "--quantity", "bowen"]).status.code(), Some(2));
    // unknown flag value
    assert_eq!(geolab(&["run", "--space", "tree:2", "--quantity", "entropy"]).status.code(), Some(2));
    assert_eq!(geolab(&["verify-table", "--only", "nope"]).status.code(), Some(2));
    // vertex budget too small for the patch
    let o = geolab(&["run", "--space", "tree:2", "--quantity", "hcov", "--horizon", "6", "--radius", "1/2", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_table_exact_rows_and_fault() {
    let o = geolab(&["verify-table", "--only", "sft"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("7 rows, 0 failed"));
    let o = geolab(&["verify-table", "--only", "hcrit", "--inject-wrong-voltage"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}
