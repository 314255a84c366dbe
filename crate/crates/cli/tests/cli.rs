//! End-to-end tests driving the compiled binary: table contents, verdicts,
//! exit codes, JSON mode, flag/file precedence, and byte determinism.

use std::process::{Command, Output};

fn kcech(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcech")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn hilbert_table_matches_the_staircase() {
    let out = kcech(&["hilbert", &data("plane.json"), "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for row in ["0\t0\t-\t-", "1\t1\t1\t-", "2\t3\t2\t1", "5\t15\t5\t1"] {
        assert!(text.contains(row), "missing row {row:?} in:\n{text}");
    }
    assert!(text.contains("# e0\t1"));
}

#[test]
fn multiplicity_commands_verify_the_identities() {
    let out = kcech(&["verify-mult1", &data("weighted.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("chi_koszul\t6") && text.contains("e0\t6"));
    assert!(text.contains("# verdict\tPASS"));

    let out = kcech(&["verify-mult2", &data("mult2_shift.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for row in ["e0_a\t9", "weight_product\t1", "e0_q\t4", "chi_stable\t5"] {
        assert!(text.contains(row), "missing row {row:?} in:\n{text}");
    }
}

#[test]
fn validation_failures_exit_with_code_two() {
    let out = kcech(&["hilbert", &data("bad_monomial.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("a[0].monomial"));

    let out = kcech(&["verify-mult1", &data("nonsop.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("system of parameters"));
}

#[test]
fn complex_report_carries_invariant_verdicts() {
    let out = kcech(&["complex-report", &data("weighted.json"), "--which", "L", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# chi_terms\t6"));
    for check in ["d_squared", "permutation", "annihilation", "cone"] {
        assert!(text.contains(&format!("# check_{check}\tok")), "{check} not ok:\n{text}");
    }
    assert!(text.contains("# verdict\tPASS"));
}

#[test]
fn cech_local_prints_the_plane_table() {
    let out = kcech(&["cech", &data("plane.json"), "--kind", "local", "--max-degree", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for row in ["2\t-2\t1\t1\tstable", "2\t-3\t2\t2\tstable", "2\t-4\t3\t3\tstable"] {
        assert!(text.contains(row), "missing row {row:?} in:\n{text}");
    }
    assert!(text.contains("# unstable_cells\t0"));
}

#[test]
fn cech_reports_unstable_cells_without_failing() {
    let out = kcech(&[
        "cech",
        &data("torsion.json"),
        "--kind",
        "L",
        "--max-degree",
        "4",
        "--k-max",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0), "unstable rows must not change the exit code");
    let text = stdout(&out);
    assert!(text.contains("1\t-4\t-\t-\tunstable"));
    assert!(text.contains("1\t-1\t1\t1\tstable"));
}

#[test]
fn star_check_verdicts_drive_the_exit_code() {
    let out = kcech(&["star-check", &data("weighted.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("0\tx^2\t2\t0\t0\ttrue"));
    assert!(text.contains("1\ty^3\t3\t0\t0\ttrue"));

    let out = kcech(&["star-check", &data("zerodivisor.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("# verdict\tFAIL"));
}

#[test]
fn sat_reports_the_saturation_stage_and_instability() {
    let out = kcech(&["sat", &data("dim1.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0\tx\t1\t3\tfull\t(1)"));

    let out = kcech(&["sat", &data("dim1.json"), "--l-max", "4", "--window", "4"]);
    assert_eq!(out.status.code(), Some(3), "a chain with no settled window must exit 3");
}

#[test]
fn corpus_runs_are_byte_identical() {
    let first = kcech(&["corpus", "--size", "6", "--seed", "7"]);
    let second = kcech(&["corpus", "--size", "6", "--seed", "7"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("# verdict\tPASS"));
}

#[test]
fn json_mode_emits_one_parseable_document() {
    let out = kcech(&["verify-mult1", &data("weighted.json"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(doc["command"], "verify-mult1");
    assert_eq!(doc["footer"]["verdict"], "PASS");
    assert_eq!(doc["params"]["p"], 32003);
    assert!(doc["rows"].as_array().is_some_and(|rows| rows.len() == 2));
}

#[test]
fn flags_override_file_params() {
    // plane.json fixes n = 2; the flag widens the table.
    let from_file = kcech(&["hilbert", &data("plane.json")]);
    let from_flag = kcech(&["hilbert", &data("plane.json"), "--n", "3"]);
    let count = |out: &Output| stdout(out).lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(count(&from_file), 1 + 3, "header plus rows n = 0..2");
    assert_eq!(count(&from_flag), 1 + 4, "header plus rows n = 0..3");
}
