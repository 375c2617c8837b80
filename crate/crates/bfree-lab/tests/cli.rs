//! Black-box checks of the installed binary: exit codes, output schema,
//! file output, and help coverage.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bfree-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawning the CLI")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn member_example_matches_contract() {
    let out = run(&["qset", "member", "--spec", "kfree:2", "--q", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    assert!(body.contains("\"member\":false"), "{body}");
    assert!(body.ends_with('\n'));
}

#[test]
fn malformed_spec_exits_two_and_names_the_grammar() {
    let out = run(&["qset", "member", "--spec", "squarefree", "--q", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.contains("kfree:k | coprime:m | bfree:b1,b2,… | table:@file"),
        "{err}"
    );
    assert!(stdout(&out).is_empty());
}

#[test]
fn unknown_subcommand_exits_two() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_error_exits_two() {
    // tau <= 1 is outside every formula's hypotheses
    let out = run(&["dim", "formula", "--n", "1", "--tau", "1", "--set", "w"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("domain"), "{}", stderr(&out));
}

#[test]
fn budget_stop_exits_three_with_certificate() {
    let out = run(&[
        "liouville", "build", "--p0", "2", "--p1", "3", "--alpha1", "1", "--steps", "6",
        "--digit-budget", "100",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let body = stdout(&out);
    assert!(body.contains("growth-exceeded"), "{body}");
    assert!(body.contains("\"pi0\":\"2\""), "{body}");
}

#[test]
fn out_flag_writes_the_file_and_keeps_stdout_quiet() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("result.json");
    let out = run(&[
        "qset", "member", "--spec", "coprime:6", "--q", "35",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.contains("\"member\":true"), "{body}");
}

#[test]
fn csv_tables_have_headers() {
    let out = run(&[
        "cf", "legendre", "--x", "271853/1048576", "--qmax", "30", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body = stdout(&out);
    assert!(body.starts_with("p,q,convergent,proof\n"), "{body}");
    assert!(body.lines().count() >= 3, "{body}");
}

#[test]
fn csv_refused_where_not_tabular() {
    let out = run(&["qset", "nu", "--spec", "kfree:2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    std::fs::write(
        &path,
        r#"{"members": [1, 2, 4, 8], "n_max": 8, "tail": {"kind": "empty"}}"#,
    )
    .unwrap();
    let literal = format!("table:@{}", path.display());
    let ok = run(&["qset", "member", "--spec", &literal, "--q", "4"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("\"member\":true"));
    let miss = run(&["qset", "member", "--spec", &literal, "--q", "3"]);
    assert!(stdout(&miss).contains("\"member\":false"));
    // past n_max with an empty tail: proven absent
    let past = run(&["qset", "member", "--spec", &literal, "--q", "16"]);
    assert!(stdout(&past).contains("\"member\":false"));
}

#[test]
fn certificate_round_trip_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let build = run(&[
        "liouville", "build", "--p0", "2", "--p1", "3", "--alpha1", "1", "--steps", "4",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(build.status.code(), Some(0));
    let verify = run(&["liouville", "verify", "--cert", path.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0), "{}", stderr(&verify));
    let body = stdout(&verify);
    assert!(body.contains("\"all_pass\":true"), "{body}");
    assert!(body.contains("\"alpha_match\":true"), "{body}");
}

#[test]
fn formula_rejects_conflicting_exponent_sources() {
    let out = run(&[
        "dim", "formula", "--n", "2", "--tau", "3", "--set", "wq",
        "--spec", "kfree:2", "--nu", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn formula_interval_contract() {
    let out = run(&[
        "dim", "formula", "--n", "2", "--tau", "3", "--spec", "coprime:6", "--set", "wstar",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"interval\":[\"2/3\",\"1\"]"), "{}", stdout(&out));
}

#[test]
fn thread_env_variable_is_accepted() {
    let out = bin()
        .env("BFREE_LAB_THREADS", "1")
        .args(["dim", "critical", "--spec", "bfree:", "--n", "1", "--tau", "3", "--qmax", "65536"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"s_star\":\"0.66"), "{}", stdout(&out));
}

#[test]
fn every_subcommand_help_mentions_the_schema() {
    let leaves: &[&[&str]] = &[
        &["cf", "expand"],
        &["cf", "convergents"],
        &["cf", "legendre"],
        &["qset", "member"],
        &["qset", "verify"],
        &["qset", "support"],
        &["qset", "nu"],
        &["qset", "euler"],
        &["liouville", "build"],
        &["liouville", "verify"],
        &["liouville", "evidence"],
        &["liouville", "profile"],
        &["plane", "lift"],
        &["plane", "threshold"],
        &["plane", "transfer"],
        &["plane", "points"],
        &["plane", "wstar"],
        &["dim", "formula"],
        &["dim", "series"],
        &["dim", "critical"],
    ];
    for leaf in leaves {
        let mut args: Vec<&str> = leaf.to_vec();
        args.push("--help");
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{leaf:?}");
        let body = stdout(&out);
        assert!(body.contains("JSON schema v1"), "{leaf:?} help lacks schema note");
        assert!(body.contains("--format"), "{leaf:?} help lacks global flags");
    }
}

#[test]
fn json_numbers_are_strings() {
    let out = run(&["plane", "threshold", "--a", "3,4,5", "--tau", "5/2"]);
    let body = stdout(&out);
    // all payload numbers quoted: no bare digit follows a colon
    for (i, ch) in body.char_indices() {
        if ch == ':' {
            let next = body[i + 1..].chars().next().unwrap();
            assert!(
                !next.is_ascii_digit(),
                "bare numeric value in JSON output: {body}"
            );
        }
    }
}
