//! Exit-code and report contract of the `marketsim` binary.

use std::fs;
use std::path::Path;
use std::process::Command;

fn marketsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_marketsim"))
}

fn fixture(name: &str) -> String {
    format!("{}/tests/scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn run_passing_scenario_exits_zero() {
    let out = marketsim()
        .args(["run", &fixture("marketplace_sale.jsonl")])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn run_structured_report_is_written_and_stable() {
    let mut bytes = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let out = marketsim()
            .args([
                "run",
                &fixture("auction.jsonl"),
                "--format",
                "structured",
                "--report-dir",
                dir.path().to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        bytes.push(fs::read(dir.path().join("auction.json")).unwrap());
    }
    assert_eq!(bytes[0], bytes[1], "structured report differs across runs");
    assert!(serde_json::from_slice::<serde_json::Value>(&bytes[0]).is_ok());
}

#[test]
fn failing_command_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.jsonl");
    fs::write(
        &p,
        concat!(
            "{\"cmd\":\"create_chain\",\"chain\":\"main\"}\n",
            "{\"cmd\":\"transfer_native\",\"chain\":\"main\",\"from\":\"a\",\"to\":\"b\",\"amount\":1}\n"
        ),
    )
    .unwrap();
    let out = marketsim()
        .args(["run", p.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parse_error_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("junk.jsonl");
    fs::write(&p, "{\"cmd\":\"no_such_command\"}\n").unwrap();
    let out = marketsim()
        .args(["run", p.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(!Path::new("junk.json").exists());
}

#[test]
fn check_validates_without_running() {
    let out = marketsim()
        .args(["check", &fixture("negative/escrow.jsonl")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn fuzz_clean_run_exits_zero() {
    let out = marketsim()
        .args(["fuzz", "--steps", "150", "--seed", "42", "--runs", "4"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}
