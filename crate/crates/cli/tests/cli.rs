use std::fs;
use std::process::{Command, Output};

fn qdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdiff")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn first_differential_of_a_generator() {
    let o = qdiff(&["diff", "-k", "1", "x1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "dx1");
}

#[test]
fn d3_is_zero_modulo_the_ideal() {
    let o = qdiff(&["diff", "-k", "3", "--mod-ideal", "x1 x2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("member of I_q\n"), "{}", stdout(&o));
}

#[test]
fn reduce_and_member() {
    let o = qdiff(&["reduce", "--rules", "raw", "dx1 (*) dx2"]);
    assert_eq!(stdout(&o).trim(), "dx2 (*) dx1 * q");
    let o = qdiff(&["reduce", "--rules", "raw", "--order", "asc", "dx1 (*) dx2"]);
    assert_eq!(stdout(&o).trim(), "dx1 (*) dx2");

    let o = qdiff(&["member", "dx1 dx2 - q dx2 dx1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("rel1(1,2)"));
    assert_eq!(code(&qdiff(&["member", "dx1"])), 1);
}

#[test]
fn exit_codes_for_bad_input() {
    let o = qdiff(&["diff", "d3x1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("d^3 x^i = 0"));
    assert_eq!(code(&qdiff(&["diff", "x3"])), 2);
    assert_eq!(code(&qdiff(&["diff", "-k", "4", "x1"])), 2);
    assert_eq!(code(&qdiff(&["frobnicate"])), 2);
    // A size cap of 1 cannot hold any spanning set.
    assert_eq!(code(&qdiff(&["--size-cap", "1", "member", "d2x1 (*) dx2"])), 3);
    assert_eq!(code(&qdiff(&["reduce", "--max-steps", "0", "dx1 (*) dx2"])), 3);
}

#[test]
fn config_file_and_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("session.json");
    fs::write(&path, r#"{"n": 2, "preset": "scalar-twist", "format": "json"}"#).unwrap();
    let o = qdiff(&["--config", path.to_str().unwrap(), "diff", "-k", "2", "x1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["text"], "d2x1");
    assert_eq!(v["k"], 2);

    fs::write(&path, r#"{"n": 2, "bogus": true}"#).unwrap();
    assert_eq!(code(&qdiff(&["--config", path.to_str().unwrap(), "diff", "x1"])), 2);
}

#[test]
fn verify_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = qdiff(&[
            "--format", "json", "--seed", "11", "verify", "--suite", "expansions,d3,leibniz", "--samples", "4",
            "--output", out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(out).unwrap()
    };
    let a = run("a.json");
    assert_eq!(a, run("b.json"));
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["seed"], 11);
}

#[test]
fn latex_output() {
    let o = qdiff(&["--format", "latex", "diff", "x1 x2"]);
    assert_eq!(stdout(&o).trim(), "dx^{1}\\,x^{2} + dx^{2}\\,x^{1}");
}
