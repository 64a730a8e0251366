use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn twoband(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_twoband"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const ONES: &str = r#"{"n":4,"b":1,"k":2,"mode":"positive","lower":[1,1,1],"upper":[1,1]}"#;

#[test]
fn analyze_ones_example() {
    let out = twoband(&["analyze"], ONES);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["p"], 3);
    assert_eq!(v["zero_multiplicity"], 1);
    assert_eq!(v["source"], "structured");
    let r = v["rays"][1]["radii"][0].as_f64().unwrap();
    assert!((r - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
}

#[test]
fn analyze_empty_bands() {
    let out = twoband(
        &["analyze"],
        r#"{"n":2,"b":3,"k":3,"mode":"positive","lower":[],"upper":[]}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["zero_multiplicity"], 2);
    assert!(v["rays"].as_array().unwrap().iter().all(|r| r["radii"].as_array().unwrap().is_empty()));
}

#[test]
fn malformed_input_exits_2() {
    let out = twoband(&["analyze"], "{not json");
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_ones_example() {
    let out = twoband(&["verify", "--tol", "1e-8"], ONES);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn verify_generated_instance() {
    let gen = twoband(
        &["generate", "--n", "30", "--b", "2", "--k", "3", "--seed", "17"],
        "",
    );
    assert_eq!(gen.status.code(), Some(0));
    let text = String::from_utf8(gen.stdout).unwrap();
    let out = twoband(&["verify"], &text);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let out = twoband(&["analyze"], &text);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sign_violation_exits_2() {
    let out = twoband(
        &["verify"],
        r#"{"n":4,"b":1,"k":2,"mode":"positive","lower":[1,-1,1],"upper":[1,1]}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    let out = twoband(
        &["verify"],
        r#"{"n":4,"b":1,"k":2,"mode":"positive","lower":[1,0,1],"upper":[1,1]}"#,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn max_n_is_enforced() {
    let out = twoband(&["analyze", "--max-n", "3"], ONES);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_small_grid() {
    let spec = r#"{"n":[1,8],"b":[1,3],"k":[1,3],"seed":5}"#;
    let out = twoband(&["sweep"], spec);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 72);
    let csv = twoband(&["sweep", "--csv"], spec);
    assert_eq!(csv.status.code(), Some(0));
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 73);
}

#[test]
fn sweep_empty_range() {
    let out = twoband(&["sweep"], r#"{"n":[3,2],"b":[1,2],"k":[1,2]}"#);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), Value::Array(vec![]));
}

#[test]
fn sweep_with_zero_tolerance_reports_failures() {
    let out = twoband(&["sweep", "--tol", "0"], r#"{"n":[5,6],"b":[1,1],"k":[2,2]}"#);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(v.as_array().unwrap().iter().any(|c| c["passed"] == false
        && c["max_residual"].as_f64().unwrap() > 0.0));
}

#[test]
fn sweep_seed_flag_changes_cells() {
    let spec = r#"{"n":[3,3],"b":[1,1],"k":[2,2]}"#;
    let a = json(&twoband(&["sweep", "--seed", "1"], spec));
    let b = json(&twoband(&["sweep", "--seed", "2"], spec));
    assert_ne!(a[0]["seed"], b[0]["seed"]);
}

#[test]
fn generate_is_deterministic() {
    let args = [
        "generate", "--n", "5", "--b", "1", "--k", "2", "--seed", "7", "--low", "0.5", "--high",
        "2.0",
    ];
    let a = twoband(&args, "");
    let b = twoband(&args, "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn generate_rejects_negative_low() {
    let out = twoband(
        &["generate", "--n", "5", "--b", "1", "--k", "2", "--low", "-1"],
        "",
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_band_lengths() {
    let out = twoband(&["generate", "--n", "5", "--b", "2", "--k", "2", "--seed", "1"], "");
    let v = json(&out);
    assert_eq!(v["lower"].as_array().unwrap().len(), 3);
    assert_eq!(v["upper"].as_array().unwrap().len(), 3);
}

#[test]
fn generate_from_spec_file() {
    let out = twoband(
        &["generate", "--input", "-"],
        r#"{"n":6,"b":1,"k":2,"mode":"complex","seed":3}"#,
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["mode"], "complex");
}

#[test]
fn decompose_cyclic() {
    let out = twoband(&["decompose", "--cyclic"], ONES);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["g"], 1);
    let cyc = &v["blocks"][0]["cyclic"];
    assert_eq!(cyc["sizes"], serde_json::json!([2, 1, 1]));
    assert_eq!(cyc["blocks"][0]["orientation"], "lower");
    assert_eq!(cyc["blocks"][2]["orientation"], "upper");
    assert_eq!(cyc["base_index"], 2);

    let out = twoband(
        &["decompose"],
        r#"{"n":7,"b":2,"k":4,"mode":"positive","lower":[1,1,1,1,1],"upper":[1,1,1]}"#,
    );
    let v = json(&out);
    assert_eq!(v["perm"], serde_json::json!([1, 3, 5, 7, 2, 4, 6]));
    assert_eq!(v["block_sizes"], serde_json::json!([4, 3]));
}

#[test]
fn check_tn_reports_oscillatory_products() {
    let gen = twoband(&["generate", "--n", "16", "--b", "2", "--k", "3", "--seed", "4"], "");
    let out = twoband(&["check-tn"], &String::from_utf8(gen.stdout).unwrap());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["oscillatory"], true);
    assert_eq!(v["blocks"][0]["m"], 3);
    assert_eq!(v["blocks"][0]["report"]["tn_ok"], true);
}

#[test]
fn input_from_file() {
    let path = std::env::temp_dir().join(format!("twoband-cli-{}.json", std::process::id()));
    std::fs::write(&path, ONES).unwrap();
    let out = twoband(&["analyze", "--input", path.to_str().unwrap()], "");
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    let missing = twoband(&["analyze", "--input", "/nonexistent/file.json"], "");
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_2() {
    assert_eq!(twoband(&["frobnicate"], "").status.code(), Some(2));
}
