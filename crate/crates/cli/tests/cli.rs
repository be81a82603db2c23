use std::process::{Command, Output};

use serde_json::{json, Value};

fn fh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_faberhurwitz")).args(args).env_remove("FABERHURWITZ_PROFILE").output().expect("spawn")
}

fn fh_json(args: &[&str]) -> Value {
    let out = fh(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn frac(n: i64) -> Value {
    json!({"num": n.to_string(), "den": "1"})
}

#[test]
fn hurwitz_reference_values() {
    assert_eq!(fh_json(&["hurwitz", "--alpha", "2,1"])["H"], frac(4));
    assert_eq!(fh_json(&["hurwitz", "--alpha", "3"])["H"], frac(1));
    assert_eq!(fh_json(&["double-hurwitz", "--alpha", "2", "--beta", "1,1"])["H"], frac(1));
}

#[test]
fn oracle_agrees_with_closed_form() {
    for a in ["1", "2", "1,1", "3", "2,1", "1,1,1", "4", "3,1", "2,2", "2,1,1"] {
        let c = fh_json(&["hurwitz", "--alpha", a]);
        let o = fh_json(&["hurwitz", "--alpha", a, "--oracle"]);
        assert_eq!(c, o, "alpha {a}");
    }
}

#[test]
fn faber_hurwitz_values() {
    let v = fh_json(&["faber-hurwitz", "--genus", "1", "--alpha", "2"]);
    assert_eq!(v, json!({"F": frac(5), "rFab": 2}));
    assert_eq!(fh_json(&["faber-hurwitz", "--genus", "1", "--alpha", "3"])["F"], frac(39));
}

#[test]
fn faber_numbers_match_conjecture() {
    let rows = fh_json(&["faber-numbers", "--genus", "2", "--parts", "2", "--compare-conjecture"]);
    let rows = rows.as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["match"] != json!(false)));
    assert!(rows.iter().any(|r| r["match"] == json!(true)));
}

#[test]
fn faber_numbers_csv() {
    let out = fh(&["faber-numbers", "--genus", "1", "--parts", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 2, "{text}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["bogus"],
        vec!["hurwitz"],
        vec!["hurwitz", "--alpha", "0"],
        vec!["hurwitz", "--alpha", "x"],
        vec!["double-hurwitz", "--alpha", "2", "--beta", "1"],
        vec!["faber-numbers", "--genus", "1", "--parts", "4"],
        vec!["series", "--name", "zeta"],
        vec!["series", "--name", "faber-hurwitz", "--genus", "1", "--u-window", "3"],
        vec!["verify", "--suite", "nope"],
    ] {
        assert_eq!(fh(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["series", "--name", "faber-hurwitz", "--genus", "1", "--z-max", "3", "--t-max", "2"];
    let a = fh(&args);
    let b = fh(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn profile_file_is_read() {
    let dir = std::env::temp_dir().join(format!("fh-profile-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.toml");
    let bad = dir.join("bad.toml");
    std::fs::write(&good, "z_max = 2\nn_max = 2\n").unwrap();
    std::fs::write(&bad, "z_max = 2\nbogus = 1\n").unwrap();
    let bin = env!("CARGO_BIN_EXE_faberhurwitz");
    let run = |p: &std::path::Path| {
        Command::new(bin).args(["series", "--name", "faber-hurwitz", "--genus", "1"]).env("FABERHURWITZ_PROFILE", p).output().unwrap()
    };
    let out = run(&good);
    assert_eq!(out.status.code(), Some(0));
    let terms: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(terms.as_array().unwrap().iter().all(|t| t["exponents"]["z"].as_i64().unwrap() <= 2));
    assert_eq!(run(&bad).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_single_suite() {
    let out = fh(&["verify", "--suite", "cg-ratio", "--max-genus", "3", "--format", "plain"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS") || l.starts_with("  ")), "{text}");
}
