//! End-to-end behaviour of the `pvt` command line.

mod common;

use std::process::Command;

use common::{tower_files, EXP_SQRT, LOG, REMARK, RICCATI};
use pvt_cli::{run, EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, EXIT_PARSE};
use serde_json::Value;

fn pvt(args: &[&str]) -> pvt_cli::Outcome {
    run(std::iter::once("pvt").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = pvt(&all);
    (out.code, serde_json::from_str(&out.stdout).expect("report is JSON"))
}

#[test]
fn corpus_round_trips() {
    let corpus = common::corpus();
    assert_eq!(corpus.len(), 50);
    for input in corpus {
        if let Err(e) = common::round_trip(input) {
            panic!("{input:?}: {e}");
        }
    }
}

#[test]
fn gcrd_prints_the_common_factor() {
    let out = pvt(&["op", "gcrd", "D^2", "D - 1/x"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("gcrd: D - 1/x\n"), "{}", out.stdout);
    assert!(out.stdout.contains("check divides_both: pass"));
}

#[test]
fn kovacic_on_airy() {
    let (code, v) = json(&["solve", "kovacic", "D^2 - x"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["command"], "solve kovacic");
    assert_eq!(v["result"]["outcome"], "NonLiouvillian");
    assert_eq!(v["result"]["liouvillian"], false);
    assert!(v["timing_ms"].is_null());
}

#[test]
fn report_layout() {
    let raw = pvt(&["--json", "op", "mul", "D", "x"]).stdout;
    let top: Vec<&str> = raw
        .lines()
        .filter_map(|l| l.strip_prefix("  \"")?.split('"').next())
        .collect();
    assert_eq!(top, ["command", "inputs", "result", "verification", "caps", "timing_ms"]);
    let v: Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(v["result"]["product"], "x*D + 1");
    assert_eq!(v["verification"]["checks"][0], serde_json::json!(["order_additive", true]));
    assert_eq!(v["caps"]["max_order"], 8);
}

#[test]
fn annihilator_of_the_remark_element() {
    let (_dir, paths) = tower_files(&[("e", EXP_SQRT)]);
    let p = paths[0].to_str().unwrap();
    let (code, v) = json(&["tower", "ann", p, "--elem", "t + 1/t", "--max-order", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["status"], "Found");
    assert_eq!(v["result"]["order"], 2);
    assert_eq!(v["result"]["operator"], REMARK);
}

#[test]
fn cap_hits_are_inconclusive() {
    let (_dir, paths) = tower_files(&[("w", RICCATI)]);
    let p = paths[0].to_str().unwrap();
    let (code, v) = json(&["tower", "ann", p, "--elem", "w", "--max-order", "3"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert_eq!(v["result"]["status"], "NotFoundWithinCap");
    assert_eq!(v["result"]["cap"], 3);
}

#[test]
fn exit_codes() {
    assert_eq!(pvt(&["op", "mul", "D^", "D"]).code, EXIT_PARSE);
    assert_eq!(pvt(&["op", "mul", "(1/D)*D", "D"]).code, EXIT_PARSE);
    assert_eq!(pvt(&["frobnicate"]).code, EXIT_PARSE);
    assert_eq!(pvt(&["solve", "kovacic", "D^3"]).code, EXIT_INVALID);
    assert_eq!(pvt(&["tower", "build", "/nonexistent/tower.json"]).code, EXIT_INVALID);
    let (_dir, paths) = tower_files(&[("bad", r#"{"generators": [{"name": "x", "kind": "primitive", "data": "1"}]}"#)]);
    let out = pvt(&["tower", "build", paths[0].to_str().unwrap()]);
    assert_ne!(out.code, EXIT_OK);
    assert!(out.stderr.starts_with("error:"), "{}", out.stderr);
    assert_eq!(pvt(&["--help"]).code, EXIT_OK);
}

#[test]
fn errors_in_json_mode() {
    let out = pvt(&["--json", "op", "gcrd", "D +", "D"]);
    assert_eq!(out.code, EXIT_PARSE);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["command"], "op gcrd");
    assert!(v["error"]["message"].as_str().unwrap().contains("column"));
}

#[test]
fn resolution_report() {
    let (_dir, paths) = tower_files(&[("log", LOG)]);
    let p = paths[0].to_str().unwrap();
    let (code, v) = json(&["tower", "resolve", p, "--gen", "l"]);
    assert_eq!(code, EXIT_OK);
    let step = &v["result"]["steps"][0];
    assert_eq!((step["a"].as_str(), step["b"].as_str()), (Some("0"), Some("1/x")));
    assert_eq!(step["hash"].as_str().unwrap().len(), 64);
}

#[test]
fn tower_files_are_left_untouched() {
    let (_dir, paths) = tower_files(&[("e", EXP_SQRT)]);
    let before = std::fs::read(&paths[0]).unwrap();
    let p = paths[0].to_str().unwrap();
    for cmd in ["build", "derive", "ann", "simdifalg"] {
        let mut args = vec!["tower", cmd, p];
        if cmd != "build" {
            args.extend(["--elem", "t"]);
        }
        assert_eq!(pvt(&args).code, EXIT_OK, "{cmd}");
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), before);
}

#[test]
fn caps_from_the_environment() {
    let (_dir, paths) = tower_files(&[("e", EXP_SQRT)]);
    let out = Command::new(env!("CARGO_BIN_EXE_pvt"))
        .args(["--json", "tower", "ann", paths[0].to_str().unwrap(), "--elem", "t + 1/t"])
        .env("PVT_MAX_ORDER", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INCONCLUSIVE));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["caps"]["max_order"], 1);
}

#[test]
fn binary_output_is_byte_stable() {
    let (_dir, paths) = tower_files(&[("e", EXP_SQRT)]);
    let p = paths[0].to_str().unwrap();
    let cases: [&[&str]; 3] = [
        &["--json", "solve", "kovacic", REMARK],
        &["--json", "tower", "simdifalg", p, "--elem", "t"],
        &["--json", "--threads", "2", "solve", "hyperexp", "D^2 - (1 + 1/x)*D + 1/x"],
    ];
    for args in cases {
        let runs: Vec<Vec<u8>> = (0..2)
            .map(|_| Command::new(env!("CARGO_BIN_EXE_pvt")).args(args).output().unwrap().stdout)
            .collect();
        assert!(!runs[0].is_empty());
        assert_eq!(runs[0], runs[1], "{args:?}");
        assert_eq!(runs[0], pvt(args).stdout.into_bytes(), "{args:?}");
    }
}
