use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bgx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bgx"))
        .args(args)
        .env_remove("BGX_WINDOW")
        .output()
        .expect("bgx runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const BAD_ADEM: &str = r#"{"name":"M","algebra":"A","degrees":{"min":0,"max":2},
"dims":{"0":1,"1":1,"2":1},"basis":{"0":["a"],"1":["b"],"2":["c"]},
"actions":{"Sq1":{"2":[[1]],"1":[[1]]}}}"#;

#[test]
fn gmod_two() {
    let o = bgx(&["gmod", "--n", "2"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["dims"], serde_json::json!({"1": 1, "2": 1}));
    assert_eq!(v["actions"]["Sq1"]["2"], serde_json::json!([[1]]));
}

#[test]
fn convert_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&bgx(&["gmod", "--n", "5"]));
    let src = write(dir.path(), "g5.json", &text);
    let dst = dir.path().join("out.json");
    let o = bgx(&["convert", &src, dst.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(dst).unwrap(), text);
}

#[test]
fn labels_are_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&bgx(&["gmod", "--n", "2"])).replace("ι2·Sq(1)", "ι2·Sq(1,0)");
    let src = write(dir.path(), "g2.json", &text);
    let out = stdout(&bgx(&["convert", &src]));
    assert!(out.contains("\"ι2·Sq(1)\""));
    assert!(!out.contains("Sq(1,0)"));
}

#[test]
fn adem_violation_exits_nine() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "bad.json", BAD_ADEM);
    let o = bgx(&["convert", &src]);
    assert_eq!(o.status.code(), Some(9));
    assert!(stderr(&o).contains("Sq^1 Sq^1"), "{}", stderr(&o));
}

#[test]
fn schema_errors_carry_a_pointer() {
    let dir = tempfile::tempdir().unwrap();
    let text = BAD_ADEM.replace(r#""1":[[1]]}"#, r#""1":[[1,0]]}"#);
    let src = write(dir.path(), "shape.json", &text);
    let o = bgx(&["convert", &src]);
    assert_eq!(o.status.code(), Some(11));
    assert!(stderr(&o).contains("/actions/Sq1/1/0"), "{}", stderr(&o));

    let src = write(dir.path(), "field.json", &BAD_ADEM.replace("\"name\"", "\"nom\""));
    let o = bgx(&["convert", &src]);
    assert_eq!(o.status.code(), Some(11));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bgx(&["gmod", "--bogus"]).status.code(), Some(2));
    assert_eq!(bgx(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn missing_file_is_io() {
    assert_eq!(bgx(&["convert", "/nonexistent/m.json"]).status.code(), Some(12));
}

#[test]
fn qext_check_reports_mahowald() {
    let o = bgx(&["qext", "--n", "1", "--r", "0", "--check"]);
    assert!(o.status.success());
    let err = stderr(&o);
    assert!(err.contains("ok   Q(1,0) is a short exact sequence"), "{err}");
    assert!(err.contains("equivalent to the desuspended Mahowald sequence"), "{err}");
    assert!(!err.contains("FAIL"));
    assert_eq!(json(&o)["name"].as_str().map(|s| s.contains("Q(1,0)")), Some(true));
}

#[test]
fn verify_single_criterion() {
    let o = bgx(&["verify", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("criterion  2 PASS"));
}

#[test]
fn window_controls_projective_truncation() {
    let wide = json(&bgx(&["pmod", "--k", "1"]));
    assert_eq!(wide["degrees"]["max"], 24);
    let o = Command::new(env!("CARGO_BIN_EXE_bgx"))
        .args(["pmod", "--k", "1"])
        .env("BGX_WINDOW", "6")
        .output()
        .unwrap();
    assert_eq!(json(&o)["degrees"]["max"], 6);
}

#[test]
fn ext_of_f2_over_e1_lies_on_even_stems() {
    let o = bgx(&["ext", "--source", "F2", "--algebra", "E1", "--smax", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: Vec<(i32, i32)> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    assert!(!rows.is_empty());
    // Ext over E(1) is F2[h0, v1]: one class at (s, s + 2b) for 0 <= b <= s.
    let expected: Vec<(i32, i32)> = (0..=4).flat_map(|s| (0..=s).map(move |b| (s, s + 2 * b))).collect();
    assert_eq!(rows, expected);
}
