use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn kunz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kunz"))
        .args(args)
        .env_remove("KUNZ_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_json_matches_golden_files() {
    for name in ["artin_schreier", "closed_immersion", "twist"] {
        let out = kunz(&["check", fixture(&format!("{name}.kz")).to_str().unwrap(), "--json"]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr(&out));
        assert_eq!(stdout(&out), golden(&format!("{name}.json")), "{name}");
    }
}

#[test]
fn closed_immersion_text_output() {
    let out = kunz(&["check", fixture("closed_immersion.kz").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("formally unramified, not formally étale"));
}

#[test]
fn classify_named_map() {
    let out = kunz(&["check", fixture("twist.kz").to_str().unwrap(), "f", "--json", "--emax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["check"], "classify");
    assert_eq!(checks[0]["result"]["iterates"].as_array().unwrap().len(), 3);
    assert_eq!(checks[0]["result"]["omega_zero"], false);
}

#[test]
fn unknown_map_is_an_input_error() {
    let out = kunz(&["check", fixture("twist.kz").to_str().unwrap(), "g"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn failed_assertion_exits_2() {
    let out = kunz(&["check", fixture("not_injective.kz").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).starts_with("FAIL"));
}

#[test]
fn parse_errors_exit_4_with_caret() {
    let out = kunz(&["check", fixture("bad_prime.kz").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    let err = stderr(&out);
    assert!(err.contains("bad_prime.kz:1:7: 6 is not a prime"), "{err}");
    assert!(err.contains("  |       ^"), "{err}");
    let out = kunz(&["check", fixture("bad_map.kz").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("not well defined"));
}

#[test]
fn missing_file_exits_4() {
    let out = kunz(&["check", "/nonexistent/file.kz"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn tiny_budget_exits_3() {
    let out = kunz(&["check", fixture("artin_schreier.kz").to_str().unwrap(), "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("UNDECIDED"));
}

#[test]
fn budget_falls_back_to_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_kunz"))
        .args(["check", fixture("artin_schreier.kz").to_str().unwrap()])
        .env("KUNZ_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn corpus_report_written_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["corpus", "--json", "--filter", "artin-schreier*", "--seed", "9", "--out", path.to_str().unwrap()];
    let first = kunz(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&first));
    let second = kunz(&args);
    assert_eq!(stdout(&second), stdout(&first));
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["summary"]["fail"], 0);
    assert!(v["cases"].as_array().unwrap().iter().all(|c| c["millis"].is_null()));
}

#[test]
fn corpus_timings_and_text_summary() {
    let out = kunz(&["corpus", "--filter", "closed-immersion/*", "--timings"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("PASS      closed-immersion/p=2 ("), "{text}");
    assert!(text.contains("2 cases: 2 pass, 0 fail, 0 not decided"), "{text}");
}

#[test]
fn corpus_with_tiny_budget_is_not_decided() {
    let out = kunz(&["corpus", "--filter", "artin-schreier/p=3", "--budget", "5"]);
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
}

#[test]
fn invalid_filter_exits_4() {
    let out = kunz(&["corpus", "--filter", "[unclosed"]);
    assert_eq!(out.status.code(), Some(4));
}
