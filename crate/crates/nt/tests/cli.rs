//! End-to-end checks of the `nt` binary and its exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn nt(args: &[&str], dir: &PathBuf) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nt"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nt-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn validate_exit_codes() {
    let dir = tempdir("validate");
    let out = nt(&["gen", "--family", "fan", "--n", "5", "-o", "."], &dir);
    assert!(out.status.success());
    let out = nt(&["validate", "fan_5.ntg"], &dir);
    assert_eq!(out.status.code(), Some(0));

    // quadrilateral inner face
    fs::write(
        dir.join("bad.ntg"),
        "ntg 1\nn 4\nboundary 4 0 1 2 3\nrot 0: 3 1\nrot 1: 0 2\nrot 2: 1 3\nrot 3: 2 0\n",
    )
    .unwrap();
    let out = nt(&["validate", "bad.ntg"], &dir);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-triangular"));

    let out = nt(&["validate", "missing.ntg"], &dir);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_and_replay_round_trip() {
    let dir = tempdir("solve");
    nt(&["gen", "--family", "wheel", "--n", "6", "-o", "."], &dir);
    let out = nt(&["solve", "wheel_6.ntg", "--method", "constructive"], &dir);
    assert_eq!(out.status.code(), Some(0));
    let cert = String::from_utf8(out.stdout).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&cert).unwrap();
    assert!(parsed["size"].as_u64().unwrap() <= parsed["bound"].as_u64().unwrap());
    fs::write(dir.join("cert.json"), &cert).unwrap();
    let out = nt(&["replay", "cert.json", "wheel_6.ntg"], &dir);
    assert_eq!(out.status.code(), Some(0));

    // a tampered certificate fails replay
    let mut tampered: serde_json::Value = serde_json::from_str(&cert).unwrap();
    tampered["vertices"] = serde_json::json!([0]);
    tampered["size"] = serde_json::json!(1);
    fs::write(dir.join("tampered.json"), tampered.to_string()).unwrap();
    let out = nt(&["replay", "tampered.json", "wheel_6.ntg"], &dir);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exception_input_exits_3() {
    let dir = tempdir("exception");
    nt(&["gen", "--family", "exceptions", "-o", "."], &dir);
    let out = nt(&["solve", "H1.ntg", "--method", "constructive"], &dir);
    assert_eq!(out.status.code(), Some(3));
    // the exact method still solves it
    let out = nt(&["solve", "H2.ntg", "--method", "exact"], &dir);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(parsed["size"].as_u64(), Some(5));
}

#[test]
fn mop_dp_requires_a_mop() {
    let dir = tempdir("mopdp");
    nt(&["gen", "--family", "h7", "-o", "."], &dir);
    let out = nt(&["solve", "h7.ntg", "--method", "mop-dp"], &dir);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_reports_json_lines() {
    let dir = tempdir("verify");
    let out = nt(
        &[
            "verify",
            "--family",
            "random-neartri",
            "--n-range",
            "8..9",
            "--samples",
            "5",
            "--seed",
            "3",
            "--oracle-max",
            "10",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11); // 10 records + aggregate
    for line in &lines {
        serde_json::from_str::<serde_json::Value>(line).expect("valid JSON line");
    }
    let agg: serde_json::Value = serde_json::from_str(lines.last().unwrap()).unwrap();
    assert_eq!(agg["count"].as_u64(), Some(10));
    assert_eq!(agg["failures"].as_u64(), Some(0));
}

#[test]
fn inspect_shows_terminal_orders() {
    let dir = tempdir("inspect");
    nt(&["gen", "--family", "h7", "-o", "."], &dir);
    let out = nt(&["inspect", "h7.ntg"], &dir);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(parsed["class"].as_str(), Some("irreducible"));
    assert_eq!(parsed["terminal_mop_orders"].as_array().unwrap().len(), 3);
}

#[test]
fn enumerate_streams_classes() {
    let dir = tempdir("enum");
    let out = nt(&["enumerate", "--n", "6", "-o", "classes"], &dir);
    assert_eq!(out.status.code(), Some(0));
    let files: Vec<_> = fs::read_dir(dir.join("classes")).unwrap().collect();
    assert_eq!(files.len(), 3);
}

#[test]
fn generation_is_byte_deterministic() {
    let a = tempdir("det-a");
    let b = tempdir("det-b");
    for dir in [&a, &b] {
        nt(
            &[
                "gen",
                "--family",
                "random-neartri",
                "--n",
                "12",
                "--interior",
                "4",
                "--seed",
                "99",
                "-o",
                ".",
            ],
            dir,
        );
    }
    let fa = fs::read(a.join("random_neartri_12_4_99.ntg")).unwrap();
    let fb = fs::read(b.join("random_neartri_12_4_99.ntg")).unwrap();
    assert_eq!(fa, fb);
}
