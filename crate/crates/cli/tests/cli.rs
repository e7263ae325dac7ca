//! End-to-end checks of the binary: output format, exit codes, database
//! override.

use std::io::Write;
use std::process::{Command, Output};

fn isharp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isharp"))
        .args(args)
        .env_remove("KNOTDB_PATH")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn dim_fixture() {
    let out = isharp(&["dim", "3_1", "-5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "5\n");

    let out = isharp(&["dim", "3_1", "-4", "--bundle", "nontrivial"]);
    assert_eq!(stdout(&out), "4\n");
}

#[test]
fn dimc_ambiguous_cell() {
    let out = isharp(&["dimc", "unknot", "0"]);
    assert_eq!(stdout(&out), "0|2\n");
}

#[test]
fn q3_prints_branch() {
    let out = isharp(&["q3", "3_1", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 (branch M<r<0)\n");
}

#[test]
fn triangles_scan_reports_zero_violations() {
    let out = isharp(&["triangles", "3_1", "--qmax", "4", "--pmax", "16"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("0 violations"));
}

#[test]
fn t2_and_incomplete_record_exit_codes() {
    let out = isharp(&["t2", "3_1"]);
    assert_eq!(stdout(&out), "3\n");

    // 4_1 has no r0/nu#: incomplete records exit 2
    let out = isharp(&["t2", "4_1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_1() {
    let out = isharp(&["dim", "3_1", "not-a-slope"]);
    assert_eq!(out.status.code(), Some(1));
    let out = isharp(&["dim", "no_such_knot", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = isharp(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    // q3 needs an odd numerator
    let out = isharp(&["q3", "3_1", "-4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn table_emits_csv() {
    let out = isharp(&["table", "3_1", "--from", "-5", "--to", "-3", "--denom-max", "2"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "slope,bundle,dim_F2,dim_C,torsion_summands");
    assert!(text.contains("-5,trivial,5,5,0"));
    assert!(text.contains("-4,nontrivial,4,4,0"));
    assert!(text.contains("-7/2,trivial,9,7,1"));
}

#[test]
fn table_output_is_byte_deterministic() {
    let a = isharp(&["table", "K_3", "--from", "-10", "--to", "10", "--denom-max", "5"]);
    let b = isharp(&["table", "K_3", "--from", "-10", "--to", "10", "--denom-max", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn propagate_pins_twist_chain() {
    let out = isharp(&["propagate"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("K_99: M = -4"), "output: {text}");
    assert!(text.contains("K_100: M = 0"));
    // the torus constraint leaves an interval with exclusions
    assert!(text.contains("T(3,5): M in [-12, 12], |M| not in {0, 4}, r2 >= 8"));
}

#[test]
fn mirror_and_sum_print_records() {
    let out = isharp(&["mirror", "3_1"]);
    let text = stdout(&out);
    assert!(text.contains("\"name\": \"m(3_1)\""));
    assert!(text.contains("\"M\": 4"));

    let out = isharp(&["sum", "3_1", "3_1"]);
    let text = stdout(&out);
    assert!(text.contains("\"M\": -8"));
}

#[test]
fn modalg_decomposes_presentations() {
    let out = isharp(&["modalg", "x^2,0,0;0,x+1,0;0,0,0"]);
    let text = stdout(&out);
    assert!(text.contains("module: free^1 \u{2295} F2[x]/(x^2) \u{2295} F2[x]/(x+1)"), "{text}");
    assert!(text.contains("v profile: [0, 0, 1]"));
    assert!(text.contains("ses: coker 2 + ker 1 = 3"));
    assert!(text.contains("psi: bijective onto ker(x), dimension 1"));

    let out = isharp(&["modalg", "x,1;0,x"]);
    assert!(stdout(&out).contains("snf: diag(1, x^2)"));
}

#[test]
fn validate_flags_bad_databases() {
    let out = isharp(&["validate"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("ok"));

    let mut tmp = tempfile_path("bad_db");
    writeln!(
        std::fs::File::create(&tmp).unwrap(),
        r#"[{{"name": "x", "r2": 6, "provenance": {{"r2": "fixture: test"}}}}]"#
    )
    .unwrap();
    let out = isharp(&["validate", "--db", tmp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("not divisible by 4"));
    std::fs::remove_file(&mut tmp).ok();
}

#[test]
fn db_flag_overrides_bundled_table() {
    let mut tmp = tempfile_path("custom_db");
    writeln!(
        std::fs::File::create(&tmp).unwrap(),
        r#"[{{"name": "custom", "r2": 12, "M": 4, "provenance": {{"r2": "fixture: test", "M": "fixture: test"}}}}]"#
    )
    .unwrap();
    let out = isharp(&["dim", "custom", "7", "--db", tmp.to_str().unwrap()]);
    assert_eq!(stdout(&out), "15\n");
    // bundled knots are gone under the override
    let out = isharp(&["dim", "3_1", "-5", "--db", tmp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_file(&mut tmp).ok();
}

#[test]
fn knotdb_path_env_var_is_honored() {
    let tmp = tempfile_path("env_db");
    writeln!(
        std::fs::File::create(&tmp).unwrap(),
        r#"[{{"name": "envknot", "r2": 4, "M": 0, "provenance": {{"r2": "fixture: test", "M": "fixture: test"}}}}]"#
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_isharp"))
        .args(["dim", "envknot", "3"])
        .env("KNOTDB_PATH", &tmp)
        .output()
        .expect("binary runs");
    assert_eq!(stdout(&out), "7\n");
    std::fs::remove_file(&tmp).ok();
}

fn tempfile_path(tag: &str) -> std::path::PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("isharp_test_{tag}_{}.json", std::process::id()));
    p
}
