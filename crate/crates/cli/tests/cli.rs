//! End-to-end runs of the `tatezeta` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tatezeta"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Writes `contents` to a per-test file in the system temp directory.
fn input(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tatezeta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn unit_ball() -> String {
    json!({"terms": [{"rep": {"digits": []}, "level": 0, "coeff": {"a": ["1"], "M": 162}}]}).to_string()
}

#[test]
fn transform_of_unit_ball_over_ramified_field() {
    let f = input("ball.json", &unit_ball());
    let out = run(&["transform", f.to_str().unwrap(), "--ram-e", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["level"], -1);
    assert_eq!(terms[0]["coeff"]["b"], json!(["1/3"]));
    assert_eq!(terms[0]["coeff"]["a"], json!([]));
}

#[test]
fn roundtrip_recovers_input() {
    let f = input("roundtrip.json", &unit_ball());
    let out = run(&["transform", f.to_str().unwrap(), "--roundtrip"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["terms"][0]["coeff"]["a"], json!(["1"]));
    // an uneven function with a √q coefficient and a negative-level term
    let uneven = json!({"terms": [
        {"rep": {"digits": [[-1, 2]]}, "level": 1, "coeff": {"a": ["3/2"], "b": ["-1"], "M": 162}},
        {"rep": {"digits": [[0, 1], [1, 2]]}, "level": 2, "coeff": {"a": ["0", "1"], "M": 162}},
        {"rep": {"digits": []}, "level": -1, "coeff": {"a": ["-5"], "M": 162}},
    ]});
    let f = input("uneven.json", &uneven.to_string());
    let dyadic = json!({"terms": [
        {"rep": {"digits": [[-2, 1], [0, 1]]}, "level": 1, "coeff": {"a": ["1/3"], "b": ["2"], "M": 16}},
        {"rep": {"digits": []}, "level": 0, "coeff": {"a": ["0", "0", "1"], "M": 16}},
    ]});
    let g = input("dyadic.json", &dyadic.to_string());
    for (path, extra) in [
        (&f, &[][..]),
        (&f, &["--ram-e", "2"][..]),
        (&g, &["--ell", "2", "--ram-e", "3"][..]),
    ] {
        let mut args = vec!["transform", path.to_str().unwrap(), "--roundtrip"];
        args.extend_from_slice(extra);
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{extra:?}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn out_flag_writes_file() {
    let f = input("out-in.json", &unit_ball());
    let target = f.with_file_name("out.json");
    let out = run(&["transform", f.to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(written["terms"][0]["level"], 0);
}

#[test]
fn malformed_input_exits_two() {
    let f = input("bad.json", "{\"terms\": [");
    let out = run(&["transform", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "parse");
}

#[test]
fn zeta_rejects_function_nonzero_at_origin() {
    let f = input("origin.json", &unit_ball());
    let out = run(&["zeta", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "SupportContainsZero");
}

#[test]
fn zeta_of_h2_at_level_two() {
    let h2 = json!({"terms": [
        {"rep": {"digits": [[0, 1]]}, "level": 2, "coeff": {"a": ["1"], "M": 162}},
        {"rep": {"digits": [[0, 1]]}, "level": 1, "coeff": {"a": ["-1/3"], "M": 162}},
    ]});
    let f = input("h2.json", &h2.to_string());
    let out = run(&["zeta", f.to_str().unwrap(), "--level", "2", "--char-index", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["text"], "1/9");
    // the unramified character sees no contribution
    let out = run(&["zeta", f.to_str().unwrap(), "--lambda", "6"]);
    assert_eq!(stdout_json(&out)["text"], "0");
}

#[test]
fn rho_closed_form_matches_h_n() {
    let out = run(&["rho"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["equal"], true);
    assert_eq!(v["rho_closed"]["text"], "(1 - λ^-1)/(1 - 1/3*λ)");
    let text = run(&["rho", "--level", "1", "--text"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("equal"));
}

#[test]
fn bad_session_parameters_exit_two() {
    let out = run(&["session", "--ell", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_json(&out)["error"].is_string());
}

#[test]
fn verify_suites_pass() {
    for suite in ["tables", "fe", "inversion"] {
        let out = run(&["verify", suite, "--cases", "4"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{suite}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        assert_eq!(stdout_json(&out)["pass"], true);
    }
}

#[test]
fn verify_all_is_deterministic() {
    let a = run(&["verify", "all", "--seed", "7", "--cases", "5"]);
    let b = run(&["verify", "all", "--seed", "7", "--cases", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = run(&["verify", "all", "--seed", "7", "--cases", "5", "--text"]);
    assert!(String::from_utf8_lossy(&text.stdout).trim_end().ends_with("ALL PASS"));
}
