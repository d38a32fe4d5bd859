//! End-to-end tests of the `ccilab` binary: report shapes, determinism,
//! and the machine-readable error path.

use std::path::PathBuf;
use std::process::{Command, Output};

fn write_config(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("ccilab-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn ccilab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccilab"))
        .args(args)
        .output()
        .expect("binary runs")
}

const SHARP_PERIODIC: &str =
    r#"{"model": {"n_left": 0, "n_right": 0, "seed": 7, "vertical_period": 1}}"#;

#[test]
fn winding_report_schema_and_values() {
    let cfg = write_config("winding.json", SHARP_PERIODIC);
    let out = ccilab(&["winding", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["exact"], serde_json::json!(-1));
    assert_eq!(doc["phase"], serde_json::json!(-1));
    assert_eq!(doc["agree"], serde_json::json!(true));
}

#[test]
fn flux_reports_trace_minus_one_at_every_cut() {
    let cfg = write_config("flux.json", SHARP_PERIODIC);
    let out = ccilab(&["flux", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cuts = doc["cuts"].as_array().unwrap();
    assert_eq!(cuts.len(), 10);
    for report in cuts {
        let trace = report["trace"].as_f64().unwrap();
        assert!((trace + 1.0).abs() <= 1e-10);
        assert_eq!(report["index"], serde_json::json!(-1));
    }
}

#[test]
fn flux_csv_has_one_row_per_eigenvalue() {
    let cfg = write_config(
        "flux_csv.json",
        r#"{"model": {"n_left": -2, "n_right": 2, "seed": 3},
            "flux": {"cuts": [0, 1]}}"#,
    );
    let out = ccilab(&["flux", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "cut,j_block,eigenvalue");
    // width 5: each cut carries 1 singleton + 2 pair blocks = 5 eigenvalues
    assert_eq!(lines.count(), 10);
}

#[test]
fn evolve_descends_the_sharp_interface() {
    let cfg = write_config(
        "evolve.json",
        r#"{"model": {"n_left": 0, "n_right": 0, "seed": 5},
            "evolve": {"steps": 40, "start": [0, 0]}}"#,
    );
    let out = ccilab(&[
        "evolve",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,mean_k,var_k,upper_weight,jmin,jmax,kmin,kmax");
    assert_eq!(lines.len(), 42);
    let last: Vec<&str> = lines[41].split(',').collect();
    assert_eq!(last[0], "40");
    assert_eq!(last[1], "-40");
}

#[test]
fn check_passes_on_a_healthy_config() {
    let cfg = write_config(
        "check_ok.json",
        r#"{"model": {"n_left": -1, "n_right": 1, "seed": 11, "vertical_period": 1}}"#,
    );
    let out = ccilab(&["check", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["passed"], serde_json::json!(true));
}

#[test]
fn chirality_violation_cites_the_site() {
    let cfg = write_config(
        "check_bad.json",
        r#"{"model": {"n_left": 0, "n_right": 0, "seed": 1,
            "overrides": [{"j": -3, "k2": 4, "q": [1,0], "r": [1,0], "t": [0,0]}]}}"#,
    );
    let out = ccilab(&["check", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], serde_json::json!("config"));
    let message = err["error"]["message"].as_str().unwrap();
    assert!(message.contains("j = -3"), "message was: {message}");
    assert!(message.contains('4'), "message was: {message}");
}

#[test]
fn schema_violations_exit_nonzero_with_json_errors() {
    let cfg = write_config(
        "bad_schema.json",
        r#"{"model": {"n_left": 0, "n_right": 0, "seed": 1}, "unknown_section": {}}"#,
    );
    let out = ccilab(&["flux", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], serde_json::json!("config"));

    let cfg = write_config(
        "bad_grid.json",
        r#"{"model": {"n_left": 0, "n_right": 0, "seed": 1}, "winding": {"grid": 2}}"#,
    );
    let out = ccilab(&["winding", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let cfg = write_config(
        "bad_row.json",
        r#"{"model": {"n_left": 0, "n_right": 0, "seed": 1,
            "overrides": [{"j": 1, "k2": 3, "q": [1,0], "r": [1,0], "t": [0,0]}]}}"#,
    );
    let out = ccilab(&["flux", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"].as_str().unwrap().contains("even"));
}

#[test]
fn winding_requires_translation_invariance() {
    let cfg = write_config(
        "aperiodic.json",
        r#"{"model": {"n_left": -1, "n_right": 1, "seed": 2}}"#,
    );
    let out = ccilab(&["winding", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], serde_json::json!("runtime"));
}

#[test]
fn identical_configs_give_byte_identical_reports() {
    let cfg = write_config(
        "determinism.json",
        r#"{"model": {"n_left": -2, "n_right": 2, "seed": 42, "vertical_period": 1},
            "bands": {"grid": 128}}"#,
    );
    for command in ["flux", "winding", "bands", "shift-witness", "index"] {
        let a = ccilab(&[command, "--config", cfg.to_str().unwrap()]);
        let b = ccilab(&[command, "--config", cfg.to_str().unwrap()]);
        assert!(a.status.success(), "{command} failed");
        assert_eq!(a.stdout, b.stdout, "{command} output not reproducible");
    }
    // CSV route too
    let a = ccilab(&[
        "bands",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    let b = ccilab(&[
        "bands",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reports_reparse_under_the_same_schema() {
    let cfg = write_config(
        "roundtrip.json",
        r#"{"model": {"n_left": 1, "n_right": 1, "seed": 9, "vertical_period": 1},
            "shift_witness": {"depth": 20}}"#,
    );
    for command in [
        "flux",
        "winding",
        "bands",
        "shift-witness",
        "index",
        "check",
    ] {
        let out = ccilab(&[command, "--config", cfg.to_str().unwrap()]);
        assert!(out.status.success(), "{command} failed");
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(doc.is_object(), "{command} did not emit a JSON object");
    }
}

#[test]
fn out_flag_writes_the_report_file() {
    let cfg = write_config("outflag.json", SHARP_PERIODIC);
    let out_path = std::env::temp_dir().join("ccilab-cli-tests/winding_report.json");
    let out = ccilab(&[
        "winding",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["exact"], serde_json::json!(-1));
}
