//! End-to-end tests of the binary: file formats, verdicts, exit codes.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blindvass"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "args {args:?}\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn run_fail(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(!out.status.success(), "expected failure for {args:?}");
    out
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("write fixture");
    path.to_string_lossy().into_owned()
}

#[test]
fn encode_letters_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "eps.json", r#"{"depth":0,"nodes":[""]}"#);
    let out = run_ok(&[
        "encode",
        "--automaton",
        "a1",
        "--tree-file",
        &tree,
        "--phases",
        "1",
        "--format",
        "letters",
    ]);
    assert_eq!(out.trim_end(), "<|+><|i->#");
}

#[test]
fn encode_symbolic_empty_set_is_all_rejecting() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "empty.json", r#"{"depth":0,"nodes":[]}"#);
    let out = run_ok(&[
        "encode",
        "--automaton",
        "a2",
        "--tree-file",
        &tree,
        "--phases",
        "1",
    ]);
    let word: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(word["counters"], 2);
    let phase = word["phases"][0].as_array().unwrap();
    assert_eq!(phase.len(), 2);
    assert!(phase.iter().all(|b| b["sign"] == "-"));
}

#[test]
fn encode_rejects_too_many_phases() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "eps.json", r#"{"depth":0,"nodes":[""]}"#);
    let out = run_fail(&[
        "encode",
        "--automaton",
        "a1",
        "--tree-file",
        &tree,
        "--phases",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("phases"), "stderr: {stderr}");
}

#[test]
fn check_symbolic_reaches_threshold_on_left_comb() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(
        dir.path(),
        "left.json",
        r#"{"depth":2,"nodes":["","L","LL"]}"#,
    );
    let word_path = dir.path().join("word.json");
    run_ok(&[
        "encode",
        "--automaton",
        "a1",
        "--tree-file",
        &tree,
        "--phases",
        "3",
        "--out",
        word_path.to_str().unwrap(),
    ]);
    let out = run_ok(&[
        "check",
        "--automaton",
        "a1",
        "--word-file",
        word_path.to_str().unwrap(),
        "--min-accepting",
        "3",
    ]);
    let verdict: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(verdict["visits"], 3);
    assert_eq!(verdict["reached_k"], true);
    assert_eq!(verdict["witness"]["kind"], "run");
    assert_eq!(verdict["witness"]["nodes"][2], "LL");
}

#[test]
fn check_letters_misses_threshold_on_right_comb() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(
        dir.path(),
        "right.json",
        r#"{"depth":3,"nodes":["","R","RR","RRR"]}"#,
    );
    let word_path = dir.path().join("word.txt");
    run_ok(&[
        "encode",
        "--automaton",
        "a1",
        "--tree-file",
        &tree,
        "--phases",
        "4",
        "--format",
        "letters",
        "--out",
        word_path.to_str().unwrap(),
    ]);
    let out = run_ok(&[
        "check",
        "--automaton",
        "a1",
        "--word-file",
        word_path.to_str().unwrap(),
        "--engine",
        "letters",
        "--min-accepting",
        "2",
    ]);
    let verdict: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(verdict["reached_k"], false);
    assert_eq!(verdict["visits"], 1);
}

#[test]
fn check_empty_word_with_zero_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let word = write(dir.path(), "empty.txt", "");
    let out = run_ok(&[
        "check",
        "--automaton",
        "a1",
        "--word-file",
        &word,
        "--engine",
        "letters",
        "--min-accepting",
        "0",
    ]);
    let verdict: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(verdict["reached_k"], true);
    assert_eq!(verdict["visits"], 0);
}

#[test]
fn check_respects_letter_budget() {
    let dir = tempfile::tempdir().unwrap();
    let word = write(dir.path(), "word.txt", "<|+>#");
    let out = run_fail(&[
        "check",
        "--automaton",
        "a1",
        "--word-file",
        &word,
        "--engine",
        "letters",
        "--min-accepting",
        "0",
        "--letter-budget",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_reports_witnesses_for_both_machines() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(
        dir.path(),
        "left.json",
        r#"{"depth":2,"nodes":["","L","LL"]}"#,
    );
    let out = run_ok(&[
        "oracle",
        "--automaton",
        "a1",
        "--tree-file",
        &tree,
        "--phases",
        "3",
        "--min-accepting",
        "3",
    ]);
    let verdict: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(verdict["kind"], "chain");
    assert_eq!(verdict["value"], 3);
    assert_eq!(verdict["reached_k"], true);

    let out = run_ok(&[
        "oracle",
        "--automaton",
        "a2",
        "--tree-file",
        &tree,
        "--phases",
        "3",
    ]);
    let verdict: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(verdict["kind"], "branch");
    assert_eq!(verdict["value"], 3);
}

#[test]
fn verify_is_deterministic_modulo_timing() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.json");
    let b_path = dir.path().join("b.json");
    for path in [&a_path, &b_path] {
        run_ok(&[
            "verify",
            "--suite",
            "t2",
            "--max-depth",
            "3",
            "--samples",
            "5",
            "--seed",
            "11",
            "--out",
            path.to_str().unwrap(),
        ]);
    }
    let mut a: Value = serde_json::from_str(&std::fs::read_to_string(&a_path).unwrap()).unwrap();
    let mut b: Value = serde_json::from_str(&std::fs::read_to_string(&b_path).unwrap()).unwrap();
    assert_eq!(a["failed"], 0);
    a["wall_ms"] = Value::Null;
    b["wall_ms"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = run_fail(&["verify", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_order_embeds_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let natural = write(
        dir.path(),
        "nat.json",
        r#"{"size":3,"leq":[[true,true,true],[false,true,true],[false,false,true]]}"#,
    );
    let out = run_ok(&["reduce-order", "--order-file", &natural]);
    let embedding: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(embedding["nodes"], serde_json::json!(["", "R", "RR"]));

    let reversed = write(
        dir.path(),
        "rev.json",
        r#"{"size":3,"leq":[[true,false,false],[true,true,false],[true,true,true]]}"#,
    );
    let out = run_ok(&["reduce-order", "--order-file", &reversed]);
    let embedding: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(embedding["nodes"], serde_json::json!(["", "L", "LL"]));

    let cyclic = write(
        dir.path(),
        "cycle.json",
        r#"{"size":2,"leq":[[true,true],[true,true]]}"#,
    );
    let out = run_fail(&["reduce-order", "--order-file", &cyclic]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("antisymmetry"), "stderr: {stderr}");
}

#[test]
fn bench_emits_csv_rows() {
    let out = run_ok(&["bench", "--seed", "3"]);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("family,phases,blocks,elapsed_ms,visits,max_counter_bits")
    );
    assert!(out.lines().any(|l| l.starts_with("symbolic-a1,40,")));
    assert!(out.lines().any(|l| l.starts_with("oracle-good-steps,12,")));
}

#[test]
fn usage_errors_exit_with_two() {
    let out = run_fail(&["encode", "--automaton", "a1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_fail(&["check", "--automaton", "a9"]);
    assert_eq!(out.status.code(), Some(2));
}
