use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use geu_cli::{EXIT_FAILURE, EXIT_INPUT, EXIT_OK};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn geu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geu")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn temp_document(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn eval_prints_choquet_values_and_strict_preference() {
    let o = geu(&["eval", &fixture("beldr.json"), "ceu"]);
    assert_eq!(code(&o), EXIT_OK);
    let out = stdout(&o);
    assert!(out.contains("a1: 1\n") && out.contains("a2: 2\n"), "{out}");
    assert!(out.contains("a1 ≺ a2"), "{out}");
}

#[test]
fn json_output_is_machine_readable() {
    let o = geu(&["--format", "json", "eval", &fixture("beldr.json"), "ceu"]);
    assert_eq!(code(&o), EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rule"], "ceu");
    assert_eq!(v["values"][1]["value"], "2");
    assert_eq!(v["relation"]["comparisons"][0]["verdict"], "<");
}

#[test]
fn regret_ties_on_the_belief_example() {
    let o = geu(&["eval", &fixture("beldr.json"), "regret"]);
    assert_eq!(code(&o), EXIT_OK);
    assert!(stdout(&o).contains("a1 ~ a2"));
}

#[test]
fn uniform_representation_of_ceu_fails_with_property_exit() {
    let o = geu(&["represent", &fixture("beldr.json"), "ceu", "thm2"]);
    assert_eq!(code(&o), EXIT_FAILURE);
    let o = geu(&["check", "uniform", &fixture("beldr.json"), "ceu"]);
    assert_eq!(code(&o), EXIT_FAILURE);
}

#[test]
fn ordinal_representation_of_ceu_succeeds() {
    let o = geu(&["represent", &fixture("beldr.json"), "ceu", "thm3"]);
    assert_eq!(code(&o), EXIT_OK, "{}", stdout(&o));
}

#[test]
fn worked_representations_succeed() {
    for (file, rule) in [("maximin.json", "maximin"), ("credal.json", "mmeu"), ("maximin.json", "regret")] {
        let o = geu(&["represent", &fixture(file), rule, "example"]);
        assert_eq!(code(&o), EXIT_OK, "{rule}: {}", stdout(&o));
    }
}

#[test]
fn lottery_and_horse_commands_run() {
    for args in [
        ["lottery", "construct", &fixture("lotteries.json")],
        ["lottery", "construct-standard", &fixture("lotteries.json")],
        ["aa", "eval", &fixture("horse.json")],
        ["aa", "flatten", &fixture("horse.json")],
    ] {
        let o = geu(&args);
        assert_eq!(code(&o), EXIT_OK, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn truncated_document_is_an_input_error_with_a_line() {
    let f = temp_document("{\"version\": 1,\n");
    let o = geu(&["eval", f.path().to_str().unwrap(), "ceu"]);
    assert_eq!(code(&o), EXIT_INPUT);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn unknown_fields_and_rules_are_input_errors() {
    let f = temp_document("{\n  \"version\": 1,\n  \"colour\": \"red\"\n}\n");
    assert_eq!(code(&geu(&["eval", f.path().to_str().unwrap(), "eu"])), EXIT_INPUT);
    assert_eq!(code(&geu(&["eval", &fixture("beldr.json"), "nonsense"])), EXIT_INPUT);
    assert_eq!(code(&geu(&["eval", "/nonexistent/problem.json", "eu"])), EXIT_INPUT);
}

#[test]
fn fuzz_is_deterministic_in_its_flags() {
    let args = ["--format", "json", "fuzz", "--seed", "7", "--count", "5"];
    let (a, b) = (geu(&args), geu(&args));
    assert_eq!(code(&a), EXIT_OK);
    assert_eq!(stdout(&a), stdout(&b));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["ok"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 11);
}

#[test]
fn fuzz_with_no_cases_succeeds() {
    let o = geu(&["fuzz", "--count", "0"]);
    assert_eq!(code(&o), EXIT_OK);
    assert!(stdout(&o).contains("result: ok"));
}

#[test]
fn fuzz_rejects_unknown_suites() {
    assert_eq!(code(&geu(&["fuzz", "--suite", "nope"])), EXIT_INPUT);
}
