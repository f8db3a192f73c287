//! End-to-end tests of the binary: exit codes, output shapes, and the
//! compile→verify round trip through the text formats.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tagforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tagforge"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_worked_example_dumps_checkpoints_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ex.ctag"), "00,010,11\nworked example\n").unwrap();
    let out = tagforge(
        &[
            "verify",
            "--program",
            "ex.ctag",
            "--input",
            "011",
            "--steps",
            "4",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    let words: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with('{') && l.contains("dataword"))
        .collect();
    assert_eq!(words.len(), 5);
    assert!(words[2].contains("\"dataword\":\"1010\""));
    assert!(text.lines().last().unwrap().contains("equivalent"));
}

#[test]
fn verify_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.ctag"), "1,-,01\n").unwrap();
    let args = [
        "verify",
        "--program",
        "p.ctag",
        "--input",
        "0110",
        "--steps",
        "16",
    ];
    let a = tagforge(&args, dir.path());
    let b = tagforge(&args, dir.path());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn verify_writes_dump_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ex.ctag"), "00,010,11\n").unwrap();
    let out = tagforge(
        &[
            "verify",
            "--program",
            "ex.ctag",
            "--input",
            "011",
            "--steps",
            "2",
            "--dump-checkpoints",
            "dump.jsonl",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let dump = fs::read_to_string(dir.path().join("dump.jsonl")).unwrap();
    assert_eq!(dump.lines().count(), 3);
}

#[test]
fn compile_then_run_the_emitted_system() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ex.ctag"), "00,010,11\n").unwrap();
    let out = tagforge(&["compile", "ex.ctag", "-o", "ex.2tag"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).contains("p=3"));

    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("ex.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["p"], 3);
    assert_eq!(meta["checkpoint_stage"], "cp");
    assert_eq!(meta["alphabet_size"], meta["q"].as_u64().unwrap() * 3);
    assert!(meta["stage_graph"]["cp"].as_array().is_some());
    assert!(meta["provenance"].as_object().map_or(0, |m| m.len()) > 100);

    // The emitted file runs as an ordinary token-level 2-tag system: the
    // encoding of "0" with its single counter pair, stepped once.
    let out = tagforge(
        &[
            "run-2tag",
            "ex.2tag",
            "--input",
            "0~@cp#0 0.~@cp#0 a@cp#0 a.@cp#0",
            "--steps",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("halt: step limit reached"), "{text}");
    assert!(text.contains("0~@disp#0"), "{text}");
}

#[test]
fn budget_env_override_starves_verification() {
    // K = 1 leaves far too few steps per macro-step; the harness reports
    // the budget divergence instead of hanging and exits 1.
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ex.ctag"), "00,010,11\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tagforge"))
        .args([
            "verify",
            "--program",
            "ex.ctag",
            "--input",
            "011",
            "--steps",
            "4",
        ])
        .env("TAGFORGE_STEP_BUDGET_K", "1")
        .current_dir(dir.path())
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    assert!(stdout(&out).contains("budget"), "{}", stdout(&out));
}

#[test]
fn run_cyclic_traces_the_reference_example() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ex.ctag"), "00,010,11\n").unwrap();
    let out = tagforge(
        &[
            "run-cyclic",
            "ex.ctag",
            "--input",
            "011",
            "--steps",
            "4",
            "--trace",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for line in ["[0] 011", "[1] 11", "[2] 1010", "[0] 01011", "[1] 1011"] {
        assert!(text.contains(line), "missing {line:?} in {text}");
    }
}

#[test]
fn parity_demo_prints_the_exact_step_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = tagforge(&["parity-demo", "--len", "16"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for (len, steps, verdict) in [(2, 2, "even"), (15, 8, "odd"), (16, 9, "even")] {
        let row = format!("{len:>4} {steps:>6} {verdict}");
        assert!(text.contains(&row), "missing {row:?} in\n{text}");
    }
}

#[test]
fn missing_and_malformed_files_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = tagforge(&["run-2tag", "missing.2tag", "--input", "a a"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    fs::write(dir.path().join("bad.ctag"), "01,2\n").unwrap();
    let out = tagforge(&["run-cyclic", "bad.ctag", "--input", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let out = tagforge(
        &["verify", "--program", "missing.ctag", "--input", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    // Usage errors come from the argument parser with the same code.
    let out = tagforge(&["no-such-command"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rejects_too_short_input_as_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ex.ctag"), "00,010,11\n").unwrap();
    let out = tagforge(
        &["verify", "--program", "ex.ctag", "--input", "01"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("shorter than longest appendant"));
}

#[test]
fn bench_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = tagforge(
        &[
            "bench",
            "--family",
            "a",
            "--lengths",
            "8,16",
            "--steps",
            "8",
            "--metrics",
            "points.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(summary["c_fit"].as_f64().unwrap() > 0.0);
    let csv = fs::read_to_string(dir.path().join("points.csv")).unwrap();
    assert!(csv.starts_with("checkpoint_index,l,counter,steps\n"));
    assert!(csv.lines().count() > 8);
}

#[test]
fn run_2tag_reports_cycles() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("fix.2tag"), "a -> a a\n").unwrap();
    let out = tagforge(&["run-2tag", "fix.2tag", "--input", "a a"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("cycle: configuration of step 0 recurs with period 1"));
}
