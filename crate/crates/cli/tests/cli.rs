//! End-to-end tests of the `frobmat` binary: report contents, output
//! determinism, exit codes, bench tables, and dump routing.

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../core/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn frobmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobmat"))
        .args(args)
        .output()
        .expect("spawning the binary")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is not valid JSON")
}

#[test]
fn x0_67_json_report_matches_the_published_example() {
    let out = frobmat(&["--input", &fixture("x0_67.txt"), "--format", "json"]);
    let v = stdout_json(&out);
    assert_eq!(v["p"], 3);
    assert_eq!(v["r"], 4);
    assert_eq!(v["q"], 1);
    assert_eq!(v["algorithm_used"], "complete_intersection");
    assert_eq!(v["h_dim"], 5);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["char_poly"], serde_json::json!([1, 1, 1, 0, 0, 0]));
    let expected = serde_json::json!([
        [1, 1, 0, 0, 0],
        [2, 0, 2, 0, 0],
        [0, 2, 1, 0, 0],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0]
    ]);
    assert_eq!(v["matrix"], expected);
    assert_eq!(v["basis"][0], "x^-2*y^-1*z^-1*v^-1*w^-1");
    assert_eq!(v["basis"][4], "x^-1*y^-1*z^-1*v^-1*w^-2");
    assert_eq!(v["D"], 5);
    assert_eq!(v["alpha"], Value::Null);
    assert_eq!(v["timings"], Value::Null);
}

#[test]
fn x0_23_json_report_matches_the_published_numbers() {
    let out = frobmat(&["--input", &fixture("x0_23.txt"), "--format", "json"]);
    let v = stdout_json(&out);
    assert_eq!(v["p"], 5);
    assert_eq!(v["algorithm_used"], "general");
    assert_eq!(v["h_dim"], 2);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["char_poly"], serde_json::json!([1, 2, 1]));
}

#[test]
fn identical_inputs_give_identical_bytes() {
    for format in ["json", "text"] {
        let a = frobmat(&["--input", &fixture("x0_67.txt"), "--format", format]);
        let b = frobmat(&["--input", &fixture("x0_67.txt"), "--format", format]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{format} output changed between runs");
    }
}

#[test]
fn text_and_json_agree_on_numbers() {
    let json = stdout_json(&frobmat(&["--input", &fixture("x0_67.txt"), "--format", "json"]));
    let out = frobmat(&["--input", &fixture("x0_67.txt"), "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(&format!("p = {}, r = {}, q = {}", json["p"], json["r"], json["q"])));
    assert!(text.contains(&format!("h^1 dimension: {}", json["h_dim"])));
    assert!(text.contains(&format!("rank: {}", json["rank"])));
    assert!(text.contains(&format!("D: {}", json["D"])));
    assert!(text.contains("char poly: a^5 + a^4 + a^3"));
    assert!(text.contains("alpha: -"));
}

#[test]
fn timings_flag_adds_the_timing_block() {
    let out = frobmat(&["--input", &fixture("fermat3.txt"), "--format", "json", "--timings"]);
    let v = stdout_json(&out);
    assert!(v["timings"]["step_a_ms"].as_f64().unwrap() >= 0.0);
    assert!(v["timings"]["step_b_ms"].as_f64().unwrap() >= 0.0);

    let text = frobmat(&["--input", &fixture("fermat3.txt"), "--timings"]);
    assert!(String::from_utf8(text.stdout).unwrap().contains("timings: step A "));
}

#[test]
fn missing_file_exits_one_with_no_stdout() {
    let out = frobmat(&["--input", "/definitely/not/here.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn algorithm_override_can_force_a_failing_path() {
    let out = frobmat(&["--input", &fixture("x0_23.txt"), "--algorithm", "ci"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("regular"));
}

#[test]
fn parse_errors_carry_file_positions() {
    let dir = std::env::temp_dir();
    let path = dir.join(format!("frobmat-cli-test-{}.txt", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "p = 5\nvars = v z\nq = 1\npoly = vz + v^2").unwrap();
    drop(f);
    let out = frobmat(&["--input", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    // The bad identifier sits on line 4 at column 8.
    assert!(err.contains(":4:8"), "stderr: {err}");
    assert!(err.contains("vz"), "stderr: {err}");
}

#[test]
fn bench_runs_every_row_and_reports_failures_inline() {
    let out = frobmat(&["--input", &fixture("fermat3.txt"), "--bench", "5,4,7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "header plus one row per prime:\n{text}");
    assert!(lines[1].starts_with('5'));
    assert!(lines[2].starts_with('4') && lines[2].contains("error"));
    assert!(lines[3].starts_with('7'));

    // Supersingular at 5, ordinary at 7.
    let rows = frobmat(&["--input", &fixture("fermat3.txt"), "--format", "json", "--bench", "5,4,7"]);
    let v: Value = serde_json::from_slice(&rows.stdout).unwrap();
    assert_eq!(v[0]["rank"], 0);
    assert_eq!(v[1]["error"].as_str().unwrap().contains("prime"), true);
    assert_eq!(v[2]["rank"], 1);
}

#[test]
fn empty_bench_list_prints_an_empty_table() {
    let out = frobmat(&["--input", &fixture("fermat3.txt"), "--bench", ""]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1, "only the header:\n{text}");
}

#[test]
fn dumps_go_to_stderr_and_leave_stdout_clean() {
    let out = frobmat(&[
        "--input",
        &fixture("elliptic.txt"),
        "--format",
        "json",
        "--dump",
        "resolution,lifts,basis",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["rank"], 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("free resolution"), "stderr: {err}");
    assert!(err.contains("psi_1"), "stderr: {err}");
    assert!(err.contains("level 1"), "stderr: {err}");
}
