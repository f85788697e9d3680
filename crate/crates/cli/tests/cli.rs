//! End-to-end checks of the `topkc` binary: output shapes, JSON schema
//! stability, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use topkc::fixtures::{EXAMPLE1_TEXT, FM_COUNTEREXAMPLE_TEXT};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_topkc"))
}

fn tmpfile(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("topkc-cli-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn winners_bloc_on_example_election() {
    let f = tmpfile("ex1-bloc.elect", EXAMPLE1_TEXT);
    let out = bin().args(["winners"]).arg(&f).args(["--rule", "bloc"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("{e,f}"), "{text}");
    assert!(text.contains("score: 6"), "{text}");
    assert!(text.contains("algorithm: separable"), "{text}");
}

#[test]
fn winners_perfectionist_json_schema() {
    let f = tmpfile("ex1-perf.elect", EXAMPLE1_TEXT);
    let out = bin()
        .args(["winners"])
        .arg(&f)
        .args(["--rule", "perfectionist", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "winners");
    assert_eq!(v["payload"]["winners"], serde_json::json!([["a", "f"]]));
    assert_eq!(v["payload"]["best_score"], "2");
    assert_eq!(v["payload"]["exact"], true);
    assert!(v["duration_ms"].as_f64().unwrap() >= 0.0);
    assert!(v["input_sha256"].as_str().unwrap().len() == 64);
}

#[test]
fn winners_greedy_reports_inexact() {
    let f = tmpfile("ex1-greedy.elect", EXAMPLE1_TEXT);
    let out = bin()
        .args(["winners"])
        .arg(&f)
        .args(["--rule", "cc-alpha", "--algorithm", "greedy"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("score: 6"), "{text}");
    assert!(text.contains("exact: false"), "{text}");
}

#[test]
fn analyze_g_alpha_k_cc() {
    let out = bin().args(["analyze-g", "0,1,1"]).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("concave: true"), "{text}");
    assert!(text.contains("(k1,k2) = (0,1)"), "{text}");
    assert!(text.contains("owa: (1,0)"), "{text}");
}

#[test]
fn analyze_g_bloc_and_perfectionist() {
    let out = bin().args(["analyze-g", "0,1,2,3"]).output().unwrap();
    let text = stdout(&out);
    assert!(text.contains("convex: true  concave: true"), "{text}");
    assert!(text.contains("fixed-majority: yes"), "{text}");
    assert!(text.contains("owa: (1,1,1)"), "{text}");

    let out = bin().args(["analyze-g", "0,0,1"]).output().unwrap();
    let text = stdout(&out);
    assert!(text.contains("singularity: 2"), "{text}");
    assert!(text.contains("fixed-majority: yes"), "{text}");
    assert!(text.contains("owa: (0,1)"), "{text}");
}

#[test]
fn check_fm_verdicts_on_counterexample() {
    let f = tmpfile("fmce.elect", FM_COUNTEREXAMPLE_TEXT);
    for (rule, needle) in [("cc-alpha", "FAIL"), ("sntv", "FAIL"), ("bloc", "PASS"),
                           ("perfectionist", "PASS")] {
        let out = bin().args(["check-fm"]).arg(&f).args(["--rule", rule]).output().unwrap();
        assert!(out.status.success(), "{rule}");
        assert!(stdout(&out).starts_with(needle), "{rule}: {}", stdout(&out));
    }
}

#[test]
fn witness_writes_verified_files() {
    let prefix = std::env::temp_dir().join(format!("topkc-wit-{}", std::process::id()));
    let prefix = prefix.to_str().unwrap();
    let out = bin()
        .args(["witness", "--g", "0,1,1", "--m", "4", "--k", "2", "--out", prefix])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("self-verification: PASS"));
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{prefix}.json")).unwrap()).unwrap();
    assert_eq!(sidecar["verified"], true);
    let parsed =
        topkc::election::parse_election(&std::fs::read_to_string(format!("{prefix}.elect")).unwrap())
            .unwrap();
    assert_eq!(parsed.k, 2);
}

#[test]
fn gen_x3c_reports_target() {
    let out = bin()
        .args(["gen", "x3c", "--universe", "6", "--sets", "0,1,2;3,4,5", "--json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["payload"]["k"], 2);
    assert_eq!(v["payload"]["target_score"], "6");
    let parsed =
        topkc::election::parse_election(v["payload"]["election"].as_str().unwrap()).unwrap();
    assert_eq!(parsed.k, 2);
    assert_eq!(parsed.election.num_voters(), 6);
}

#[test]
fn bench_emits_csv() {
    let out = bin()
        .args(["bench", "--suite", "greedy", "--sizes", "8,10"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,m,n,k,duration_ms,status"));
    assert_eq!(lines.clone().count(), 2);
    assert!(lines.all(|l| l.starts_with("greedy,") && l.ends_with(",ok")));
}

#[test]
fn exit_codes_are_stable() {
    // 2: unreadable/invalid input
    let out = bin().args(["winners", "/nonexistent.elect", "--rule", "bloc"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["analyze-g", "0,2,1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // 3: precondition violation (greedy needs a concave counting function)
    let f = tmpfile("exit3.elect", EXAMPLE1_TEXT);
    let out = bin()
        .args(["winners"])
        .arg(&f)
        .args(["--rule", "perfectionist", "--algorithm", "greedy"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // 4: enumeration cap exceeded
    let out = bin()
        .args(["winners"])
        .arg(&f)
        .args(["--rule", "cc-alpha", "--algorithm", "brute", "--cap", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn decimal_flag_changes_display_only() {
    let f = tmpfile("dec.elect", EXAMPLE1_TEXT);
    let out = bin()
        .args(["score"])
        .arg(&f)
        .args(["--rule", "pav", "--t", "2", "--committee", "e,f", "--json", "--decimal"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // the exact rational is always present; --decimal only affects display
    let exact = v["payload"]["score"].as_str().unwrap();
    assert!(exact.chars().all(|c| c.is_ascii_digit() || c == '/'));
    assert!(v["payload"]["score_display"].as_str().unwrap().contains('.'));
}
