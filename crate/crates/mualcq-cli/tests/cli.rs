//! End-to-end tests of the binary: exit codes, output shapes and
//! determinism, driven over the shipped corpus.

use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name]
        .iter()
        .collect();
    path.to_str().expect("utf-8 path").to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mualcq"))
        .args(args)
        .env_remove("MUALCQ_MAX_SIZE")
        .env_remove("MUALCQ_OUTPUT")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn sat_unknown_exits_two() {
    let out = run(&["sat", "mu X. exists child. X", "--max", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("unknown up to size 3"), "{text}");
    assert!(text.contains("advisory"), "{text}");
}

#[test]
fn sat_witness_exits_zero_with_model() {
    let out = run(&["sat", "nu X. exists succ. X", "--max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("satisfiable"), "{text}");
    assert!(text.contains("role succ: [(d1,d1)]"), "{text}");
}

#[test]
fn sat_in_tbox_uses_models_of_the_tbox() {
    // A stream exists only in a model with a succ cycle.
    let out = run(&["sat", "stream", "--tbox", &corpus("stream.tbx"), "--max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("succ: [(d1,d1)]"));
}

#[test]
fn implies_holds_and_refutes_with_matching_exit_codes() {
    let out = run(&[
        "implies",
        "--tbox",
        &corpus("mgm.tbx"),
        "human",
        "mgm",
        "--max",
        "2",
        "--strategy",
        "both",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("holds up to size 2 (both strategies agree)"));

    let out = run(&[
        "implies",
        "--tbox",
        &corpus("human_horse.tbx"),
        "human",
        "horse",
        "--max",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("refuted"), "{text}");
    assert!(text.contains("domain:"), "{text}");
}

#[test]
fn structured_output_uses_stable_fields() {
    let out = run(&[
        "--output",
        "structured",
        "implies",
        "--tbox",
        &corpus("human_horse.tbx"),
        "human",
        "horse",
        "--max",
        "2",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("verdict: refuted\nelement: "), "{text}");

    let out = run(&["--output", "structured", "sat", "bot", "--max", "2"]);
    let text = stdout(&out);
    assert!(text.contains("verdict: unknown-up-to\nbound: 2"), "{text}");
}

#[test]
fn eval_prints_the_chain_extension() {
    let out = run(&[
        "eval",
        "--model",
        &corpus("chain.mdl"),
        "mu X. emptylist or (node and atmost 1 succ. top and exists succ. X)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "extension: [n1, n2, n3, e]\n");
}

#[test]
fn eval_supports_free_bindings_and_warns_on_unknown_names() {
    let out = run(&[
        "eval",
        "--model",
        &corpus("chain.mdl"),
        "exists succ. X",
        "--free",
        "X=n3,e",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "extension: [n2, n3]\n");

    let out = run(&["eval", "--model", &corpus("chain.mdl"), "ghost"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "extension: []\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not interpret concept `ghost`"));
}

#[test]
fn translate_targets_both_calculi() {
    let out = run(&["translate", "mu X. exists child. X", "--target", "mu"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "formula: mu X. <child> X\n");

    let out = run(&["translate", "atleast 1 r. p", "--target", "detmu"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("formula: <r> mu Z. p | <r_new> Z"), "{text}");
    assert!(text.contains("fresh r -> r_new"), "{text}");

    // Number restrictions cannot go to the plain calculus.
    let out = run(&["translate", "atleast 1 r. p", "--target", "mu"]);
    assert_eq!(out.status.code(), Some(65));
}

#[test]
fn check_distinguishes_parse_and_validation_failures() {
    let ok = run(&["check", &corpus("foo_hp.con")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("ok: closed concept"));

    let ok = run(&["check", &corpus("four_assertions.tbx")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("ok: TBox with 8 inclusions"));

    let dir = tempdir();
    let garbled = dir.join("garbled.con");
    std::fs::write(&garbled, "mu X. and and").unwrap();
    let out = run(&["check", garbled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));

    let negative = dir.join("negative.con");
    std::fs::write(&negative, "mu X. not X").unwrap();
    let out = run(&["check", negative.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("rejected"));
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mualcq-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn models_streams_and_counts() {
    let out = run(&["models", "--tbox", &corpus("stream.tbx"), "--size", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.matches("model ").count(), 4);
    assert!(text.ends_with("count: 4\n"), "{text}");
}

#[test]
fn suite_runs_clean() {
    let out = run(&["suite", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("result: ok"), "{text}");
}

#[test]
fn usage_errors_exit_sixty_four() {
    let out = run(&["sat"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "suite", "--samples", "15", "--seed", "99",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), second.status.code());

    let args = ["sat", "nu X. exists succ. X", "--max", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
