//! End-to-end tests against the built binary: flags, exit codes, formats,
//! and the no-color switch.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lintmender"));
    cmd.env("LINTMENDER_NO_COLOR", "1");
    cmd
}

fn write(dir: &Path, rel: &str, content: &str) {
    let path = dir.join(rel);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).unwrap();
    }
    std::fs::write(path, content).unwrap();
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn scan_exit_codes_follow_the_contract() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "clean.rs", "fn main() {}\n");
    let out = bin().arg("scan").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    write(dir.path(), "dirty.rs", "fn f() { let x = 1; }\n");
    let out = bin().arg("scan").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    write(dir.path(), "broken.rs", "fn f() { \"unterminated }\n");
    let out = bin().arg("scan").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("broken.rs"));
}

#[test]
fn unknown_root_and_unknown_lint_are_usage_errors() {
    let out = bin().arg("scan").arg("/no/such/dir/exists").output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("scan")
        .arg(dir.path())
        .args(["--lints", "not_a_real_lint"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown lint"));
}

#[test]
fn json_scan_is_deterministic_across_invocations() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.rs", "fn f() { let x = 3; }\nstruct A;\n");
    write(dir.path(), "b.rs", "fn g(mut n: i32, p: i32) { n /= p; }\n");
    let run = || {
        let out = bin()
            .arg("scan")
            .arg(dir.path())
            .args(["--format", "json"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(1));
        stdout(&out)
    };
    let first = run();
    assert_eq!(first, run());
    let parsed: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(parsed["schema"], "1");
    assert!(parsed["files"].as_array().unwrap().len() == 2);
    assert!(parsed["density_before"]["total_warnings"].as_u64().unwrap() > 0);
}

#[test]
fn dry_run_prints_a_diff_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let src = "fn f(mut i: i32) {\n    i += 1;\n}\n";
    write(dir.path(), "m.rs", src);
    let out = bin()
        .arg("fix")
        .arg(dir.path())
        .arg("--dry-run")
        .output()
        .unwrap();
    let text = stdout(&out);
    // the dry-run diff reflects the full fixpoint, suffix cascade included
    assert!(text.contains("+    i = i.wrapping_add(1_i32);"), "{text}");
    assert_eq!(std::fs::read_to_string(dir.path().join("m.rs")).unwrap(), src);
    // exit code reflects the after state the fix would produce
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn fix_applies_and_respects_custom_suffix_and_comment() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "m.rs",
        "fn f() -> i64 {\n    unsafe { init() };\n    return 7;\n}\n",
    );
    let out = bin()
        .arg("fix")
        .arg(dir.path())
        .args(["--suffix-int", "i64"])
        .args(["--safety-comment", "SAFETY: reviewed by the build system"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let fixed = std::fs::read_to_string(dir.path().join("m.rs")).unwrap();
    assert_eq!(
        fixed,
        "fn f() -> i64 {\n    // SAFETY: reviewed by the build system\n    unsafe { init() };\n    return 7_i64;\n}\n"
    );
}

#[test]
fn lints_flag_restricts_detection() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "m.rs", "fn f(mut i: i32) { i += 1; }\nstruct S;\n");
    let out = bin()
        .arg("scan")
        .arg(dir.path())
        .args(["--lints", "missing_debug_implementations"])
        .args(["--format", "csv"])
        .output()
        .unwrap();
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2, "{text}");
    assert!(text.lines().nth(1).unwrap().contains("missing_debug_implementations"));
}

#[test]
fn exclude_glob_prunes_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "keep.rs", "fn f() { let x = 1; }\n");
    write(dir.path(), "skip_me.rs", "fn g() { let y = 2; }\n");
    let out = bin()
        .arg("scan")
        .arg(dir.path())
        .args(["--exclude", "**/skip_*.rs"])
        .args(["--format", "csv"])
        .output()
        .unwrap();
    let text = stdout(&out);
    assert!(text.contains("keep.rs"));
    assert!(!text.contains("skip_me.rs"));
}

#[test]
fn no_color_strips_ansi_sequences() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "m.rs", "fn f() { let x = 1; }\n");
    let with_color = Command::new(env!("CARGO_BIN_EXE_lintmender"))
        .env_remove("LINTMENDER_NO_COLOR")
        .arg("scan")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(stdout(&with_color).contains("\x1b["));
    let no_color = bin().arg("scan").arg(dir.path()).output().unwrap();
    assert!(!stdout(&no_color).contains("\x1b["));
}

#[test]
fn density_csv_has_the_documented_header() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "m.rs", "fn f() { let x = 1; }\n");
    let out = bin()
        .arg("density")
        .arg(dir.path())
        .args(["--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("schema,label,files,lines,line_mode,total_warnings,density_reported,density_exact\n"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn line_mode_changes_the_denominator() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "m.rs", "fn f() {\n\n    let x = 1;\n\n}\n");
    let raw = bin()
        .arg("density")
        .arg(dir.path())
        .args(["--format", "csv"])
        .output()
        .unwrap();
    let nonblank = bin()
        .arg("density")
        .arg(dir.path())
        .args(["--format", "csv", "--line-mode", "nonblank"])
        .output()
        .unwrap();
    assert!(stdout(&raw).contains(",5,raw,"), "{}", stdout(&raw));
    assert!(stdout(&nonblank).contains(",3,nonblank,"), "{}", stdout(&nonblank));
}

#[test]
fn evolve_reports_snapshots_in_order() {
    let v1 = tempfile::tempdir().unwrap();
    let v2 = tempfile::tempdir().unwrap();
    write(v1.path(), "m.rs", "fn f() { let a = 1; let b = 2; }\n");
    write(v2.path(), "m.rs", "fn f() { let a = 1_i32; let b = 2; }\n");
    let out = bin()
        .arg("evolve")
        .arg(format!("v1={}", v1.path().display()))
        .arg(format!("v2={}", v2.path().display()))
        .args(["--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let labels: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(labels, vec!["v1", "v2"]);

    let none = bin().arg("evolve").output().unwrap();
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn apply_diagnostics_reads_stdin_and_promotes() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("main.rs");
    std::fs::write(&target, "fn main() { let x = 0; }\n").unwrap();
    let zero_at = "fn main() { let x = 0; }\n".find('0').unwrap();
    let stream = serde_json::json!({
        "message": "default numeric fallback might occur",
        "code": {"code": "clippy::default_numeric_fallback"},
        "level": "warning",
        "spans": [{
            "file_name": "main.rs",
            "byte_start": zero_at as u64,
            "byte_end": (zero_at + 1) as u64,
            "line_start": 1,
            "is_primary": true,
            "suggested_replacement": "0_i32",
            "suggestion_applicability": "MaybeIncorrect",
        }],
        "children": [],
    })
    .to_string();

    let run = |promote: bool| {
        let mut cmd = bin();
        cmd.arg("apply-diagnostics")
            .arg("-")
            .args(["--root", &dir.path().display().to_string()]);
        if promote {
            cmd.args(["--promote", "default_numeric_fallback"]);
        }
        let mut child = cmd
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        child
            .stdin
            .take()
            .unwrap()
            .write_all(stream.as_bytes())
            .unwrap();
        child.wait_with_output().unwrap()
    };

    let out = run(false);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert_eq!(
        std::fs::read_to_string(&target).unwrap(),
        "fn main() { let x = 0; }\n"
    );

    let out = run(true);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(
        std::fs::read_to_string(&target).unwrap(),
        "fn main() { let x = 0_i32; }\n"
    );
}

#[test]
fn apply_diagnostics_can_source_the_stream_from_a_command() {
    // stands in for a real linter invocation; nothing here needs one
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("lib.rs");
    std::fs::write(&target, "pub fn f() -> i32 { 5 }\n").unwrap();
    let five_at = "pub fn f() -> i32 { 5 }\n".find('5').unwrap();
    let stream = serde_json::json!({
        "message": "default numeric fallback might occur",
        "code": {"code": "clippy::default_numeric_fallback"},
        "level": "warning",
        "spans": [{
            "file_name": "lib.rs",
            "byte_start": five_at as u64,
            "byte_end": (five_at + 1) as u64,
            "line_start": 1,
            "is_primary": true,
            "suggested_replacement": "5_i32",
            "suggestion_applicability": "MaybeIncorrect",
        }],
        "children": [],
    })
    .to_string();
    let stream_file = dir.path().join("stream.jsonl");
    std::fs::write(&stream_file, format!("{stream}\n")).unwrap();

    let out = bin()
        .arg("apply-diagnostics")
        .args(["--from-command", &format!("cat {}", stream_file.display())])
        .args(["--root", &dir.path().display().to_string()])
        .args(["--promote", "default_numeric_fallback"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(
        std::fs::read_to_string(&target).unwrap(),
        "pub fn f() -> i32 { 5_i32 }\n"
    );
}
