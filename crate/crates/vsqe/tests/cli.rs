//! End-to-end tests of the command-line interface: output contracts,
//! exit codes, determinism, and failure reporting through real process
//! invocations of the installed binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use vsqe::cli::{EXIT_BAD_INPUT, EXIT_BRIDGE, EXIT_CAPABILITY, EXIT_DISAGREE, EXIT_OK};
use vsqe::formula::{parse_formula, print_formula};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vsqe"))
}

fn tables_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../tables")
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .expect("piped stdin")
        .write_all(input.as_bytes())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary exits")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn qe_produces_a_quantifier_free_equivalent() {
    let out = run_with_stdin(
        &["qe", "--fold"],
        "(exists (x) (= (+ (* x x) (* b x) 1) 0))",
    );
    assert_eq!(out.status.code(), Some(EXIT_OK), "stderr: {}", stderr_of(&out));
    let printed = stdout_of(&out);
    let f = parse_formula(printed.trim()).expect("printed output reparses");
    assert!(f.is_quantifier_free(), "got {}", print_formula(&f));
    assert!(
        f.variables().into_iter().all(|v| v == "b"),
        "only the parameter may remain: {}",
        print_formula(&f)
    );
}

#[test]
fn decide_prints_a_single_boolean() {
    let yes = run_with_stdin(&["decide"], "(exists (x) (= (+ (* x x) -2) 0))");
    assert_eq!(yes.status.code(), Some(EXIT_OK), "stderr: {}", stderr_of(&yes));
    assert_eq!(stdout_of(&yes).trim(), "true");

    let no = run_with_stdin(&["decide"], "(exists (x) (< (* x x) 0))");
    assert_eq!(no.status.code(), Some(EXIT_OK), "stderr: {}", stderr_of(&no));
    assert_eq!(stdout_of(&no).trim(), "false");

    let forall = run_with_stdin(&["decide"], "(forall (x) (>= (+ (* x x) 1) 0))");
    assert_eq!(forall.status.code(), Some(EXIT_OK));
    assert_eq!(stdout_of(&forall).trim(), "true");
}

#[test]
fn verify_agrees_everywhere_and_reports_the_count() {
    let sentence = "(exists (x) (and (= (+ (* a x x) x 1) 0) (> x 0)))";
    let out = run_with_stdin(
        &["verify", "--samples", "40", "--seed", "7"],
        sentence,
    );
    assert_eq!(out.status.code(), Some(EXIT_OK), "stderr: {}", stderr_of(&out));
    assert!(
        stdout_of(&out).contains("40/40 agree"),
        "got: {}",
        stdout_of(&out)
    );
}

#[test]
fn identical_seeds_give_byte_identical_runs() {
    let sentence = "(exists (x) (<= (+ (* x x) (* a x) b) 0))";
    let args = ["verify", "--samples", "25", "--seed", "99"];
    let first = run_with_stdin(&args, sentence);
    let second = run_with_stdin(&args, sentence);
    assert_eq!(first.status.code(), Some(EXIT_OK));
    assert_eq!(first.stdout, second.stdout, "same seed must reproduce bytes");
    assert_eq!(first.status.code(), second.status.code());
}

#[test]
fn malformed_input_is_a_bad_input_error() {
    let out = run_with_stdin(&["qe"], "(exists (x) (= (+ x");
    assert_eq!(out.status.code(), Some(EXIT_BAD_INPUT));
    assert!(!stderr_of(&out).is_empty(), "parse failures must be explained");
}

#[test]
fn missing_input_file_is_a_bad_input_error() {
    let out = bin()
        .args(["qe", "--input", "/nonexistent/nowhere.fml"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(EXIT_BAD_INPUT));
}

#[test]
fn out_of_table_range_parametric_degree_is_a_capability_error() {
    // Only the tables backend is allowed, and no table covers a
    // parametric cubic.
    let out = run_with_stdin(
        &["qe", "--backend", "tables"],
        "(exists (x) (= (+ (* x x x) a) 0))",
    );
    assert_eq!(out.status.code(), Some(EXIT_CAPABILITY), "stderr: {}", stderr_of(&out));
}

#[test]
fn a_failing_bridge_command_is_a_bridge_error() {
    let out = run_with_stdin(
        &["qe", "--backend", "bridge:false"],
        "(exists (x) (< (+ x a) 0))",
    );
    assert_eq!(out.status.code(), Some(EXIT_BRIDGE), "stderr: {}", stderr_of(&out));
    assert!(!stderr_of(&out).is_empty(), "bridge failures must be explained");
}

#[test]
fn an_unspawnable_bridge_command_is_a_bridge_error() {
    let out = run_with_stdin(
        &["qe", "--backend", "bridge:/nonexistent/oracle"],
        "(exists (x) (< (+ x a) 0))",
    );
    assert_eq!(out.status.code(), Some(EXIT_BRIDGE));
}

#[test]
fn shipped_tables_validate_cleanly() {
    let out = bin()
        .args(["tables-validate", "--samples", "25"])
        .arg("--tables")
        .arg(tables_dir())
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(EXIT_OK), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).contains("0/"), "got: {}", stdout_of(&out));
}

#[test]
fn a_corrupted_table_entry_is_reported_as_a_disagreement() {
    let dir = tempfile::tempdir().expect("temp dir");
    for name in ["degree1.tables", "degree2.tables"] {
        fs::copy(tables_dir().join(name), dir.path().join(name)).expect("copy table");
    }
    // Reverse one relation inside a degree-2 substitution template.
    let path = dir.path().join("degree2.tables");
    let text = fs::read_to_string(&path).expect("readable");
    let needle = "(subst (signs -1 0) (rel <) (formula (and (and (= u2 0) (< u1 0)) (< ";
    assert!(text.contains(needle), "fixture entry must exist");
    let corrupted = text.replacen(
        "(subst (signs -1 0) (rel <) (formula (and (and (= u2 0) (< u1 0)) (< ",
        "(subst (signs -1 0) (rel <) (formula (and (and (= u2 0) (< u1 0)) (> ",
        1,
    );
    fs::write(&path, corrupted).expect("writable");

    let out = bin()
        .args(["tables-validate", "--samples", "60"])
        .arg("--tables")
        .arg(dir.path())
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(EXIT_DISAGREE), "stdout: {}", stdout_of(&out));
    assert!(
        stdout_of(&out).contains("subst (-,0) <"),
        "the corrupted entry must be named: {}",
        stdout_of(&out)
    );
}

#[test]
fn an_unparsable_table_file_is_a_bad_input_error() {
    let dir = tempfile::tempdir().expect("temp dir");
    fs::write(dir.path().join("broken.tables"), "(tables (degree 2) (version").expect("write");
    let out = bin()
        .args(["tables-validate"])
        .arg("--tables")
        .arg(dir.path())
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(EXIT_BAD_INPUT), "stderr: {}", stderr_of(&out));
}

#[test]
fn quantified_output_from_a_bridge_is_rejected() {
    // A bridge that echoes a quantified formula violates the protocol.
    let dir = tempfile::tempdir().expect("temp dir");
    let script = dir.path().join("quantified.sh");
    fs::write(&script, "#!/bin/sh\nread line\necho \"(exists (y) (> y 0))\"\n").expect("write");
    let mut perms = fs::metadata(&script).expect("stat").permissions();
    use std::os::unix::fs::PermissionsExt;
    perms.set_mode(0o755);
    fs::set_permissions(&script, perms).expect("chmod");

    let backend = format!("bridge:{}", script.display());
    let out = run_with_stdin(&["qe", "--backend", &backend], "(exists (x) (< (+ x a) 0))");
    assert_eq!(out.status.code(), Some(EXIT_BRIDGE), "stderr: {}", stderr_of(&out));
}
