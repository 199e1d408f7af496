use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use ncprob::cumulants::CumulantFunctional;
use ncprob::{FunctionalFile, MomentFunctional, WordFunctional};

fn ncprob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncprob"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ncprob(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ncprob-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const MOMENTS: &str = r#"{
  "generators": ["x", "y"],
  "max_degree": 3,
  "moments": {
    "x": "1/2", "y": "-1",
    "x.x": "1", "x.y": "1/3", "y.x": "1/3", "y.y": "2",
    "x.x.x": "0", "x.x.y": "1", "x.y.x": "-2/5", "x.y.y": "3",
    "y.x.x": "1", "y.x.y": "0", "y.y.x": "1/7", "y.y.y": "5"
  }
}"#;

#[test]
fn noncrossing_count() {
    assert_eq!(stdout(&["partitions", "--kind", "noncrossing", "--n", "4", "--count"]), "14\n");
}

#[test]
fn bell_factor_at_violating_angles() {
    assert_eq!(stdout(&["bell", "factor", "--angles", "0,2pi/3,pi,pi/3"]), "-0.250000000000\n");
}

#[test]
fn two_card_riffle_after_three_steps() {
    assert_eq!(stdout(&["shuffle", "mix", "--n", "2", "--steps", "3", "--start", "AB"]), "9/16, 7/16\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ncprob(&["partitions", "--n", "3", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(ncprob(&["partitions", "--kind", "bogus", "--n", "3"]).status.code(), Some(2));
    assert_eq!(ncprob(&["teleport"]).status.code(), Some(2));
}

#[test]
fn computation_errors_exit_one_with_diagnostic() {
    let missing = scratch("missing.json");
    let out = ncprob(&["magnus", "--in", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1);
    assert!(err.contains("missing.json"));

    let bad = scratch("bad.json");
    fs::write(&bad, r#"{"generators": ["a"], "max_degree": 2, "moments": {"a.a": "1/0"}}"#).unwrap();
    let out = ncprob(&["magnus", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));

    let good = scratch("degree.json");
    fs::write(&good, MOMENTS).unwrap();
    let out = ncprob(&["wick", "free", "--in", good.to_str().unwrap(), "--word", "x.y.x.y"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree"));
}

#[test]
fn convert_output_round_trips() {
    let input = scratch("moments.json");
    let output = scratch("boolean.json");
    fs::write(&input, MOMENTS).unwrap();
    stdout(&[
        "cumulants",
        "convert",
        "--kind",
        "boolean",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
    ]);
    let file = FunctionalFile::from_json(&fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(file.kind.as_deref(), Some("boolean"));
    let back = CumulantFunctional::from_file(&file).unwrap().to_moments().unwrap();
    let phi = MomentFunctional::from_file(&FunctionalFile::from_json(MOMENTS).unwrap()).unwrap();
    for w in phi.alphabet().words_up_to(3) {
        assert_eq!(back.value(&w).unwrap(), phi.value(&w).unwrap(), "{w:?}");
    }

    let printed = stdout(&["--format", "json", "cumulants", "convert", "--kind", "boolean", "--in", input.to_str().unwrap()]);
    assert_eq!(FunctionalFile::from_json(&printed).unwrap(), file);

    let report = stdout(&["magnus", "--in", output.to_str().unwrap()]);
    assert_eq!(report.lines().count(), 4);
    assert!(!report.contains("differ"));
}

#[test]
fn seeded_game_is_reproducible() {
    let args = ["--seed", "42", "--format", "json", "bell", "game", "--trials", "4000"];
    let a = ncprob(&args);
    let b = ncprob(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let other = ncprob(&["--seed", "43", "--format", "json", "bell", "game", "--trials", "4000"]);
    assert_ne!(a.stdout, other.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["trials"], 4000);
    assert_eq!(v["counts"].as_array().unwrap().len(), 4);
}

#[test]
fn csv_and_json_formats() {
    let csv = stdout(&["--format", "csv", "shuffle", "mix", "--n", "2", "--steps", "3", "--start", "AB"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "deck,probability,decimal");
    assert_eq!(lines[1], "AB,9/16,0.562500000000");
    assert_eq!(lines[2], "BA,7/16,0.437500000000");

    let json = stdout(&["--format", "json", "partitions", "--kind", "pair", "--n", "4"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["count"], 3);
}

#[test]
fn other_subcommands() {
    assert_eq!(stdout(&["wick", "classical", "--model", "gaussian", "--n", "4"]), "W(x^4) = x^4 - 6·x^2 + 3\n");
    assert_eq!(stdout(&["wick", "free", "--model", "semicircle", "--word", "a.a"]), "W(a.a) = a.a - 1\n");
    let clt = stdout(&["clt", "--coalgebra", "unshuffle", "--model", "gaussian", "--element", "a.a.a.a", "--n", "10,1000"]);
    assert!(clt.contains("limit = 3"));
    let spec = stdout(&["shuffle", "spectrum", "--kind", "riffle", "--n", "4"]);
    assert!(spec.contains("1/4         11"));
    let classical = stdout(&["bell", "classical"]);
    assert!(classical.ends_with("minimum = 0\n"));
}
