use std::process::Command;

use abelian_sb_cli::{run_cli, CliOutcome, SCHEMA};
use serde_json::Value;

fn run(args: &[&str]) -> CliOutcome {
    run_cli(std::iter::once("abelian-sb").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    v
}

#[test]
fn classify_zhat() {
    let v = json(&["classify", "Zhat(5)"]);
    assert_eq!(v["omega_stable"], false);
    assert_eq!(v["superstable"], true);
    assert_eq!(v["sb"], false);
    assert_eq!(v["condition3"], false);
    assert_eq!(v["route"], "PAdicWitness");
    assert_eq!(v["agreement"], true);
}

#[test]
fn classify_agreement_on_assorted_inputs() {
    for spec in [
        "0",
        "Z/6",
        "Z/2^w + Prufer(3)^w + Q",
        "sumP(all\\{2}; Z/p^1)",
        "sumK(2; all)",
        "Zhat(3)^2 + Z/4",
        "sumP(all; Zhat)",
        "sumP(all; Z/p^2)^w",
    ] {
        assert_eq!(json(&["classify", spec])["agreement"], true, "{spec}");
    }
}

#[test]
fn eq_and_iso_examples() {
    assert_eq!(json(&["eq", "Q", "Q^w"])["equivalent"], true);
    assert_eq!(json(&["iso", "Q", "Q^w"])["isomorphic"], false);
    assert_eq!(json(&["iso", "Prufer(2)^w", "Prufer(2)^aleph(1)"])["isomorphic"], false);
    assert_eq!(json(&["iso", "Z/6", "Z/2 + Z/3"])["isomorphic"], true);
    assert_eq!(json(&["eq", "Z/2", "Z/4"])["equivalent"], false);
}

#[test]
fn invariants_report() {
    let v = json(&["invariants", "Z/8^3 + Q^aleph(1) + Prufer(3)"]);
    assert_eq!(v["szmielew"]["alpha"], "Z/8^3");
    assert_eq!(v["szmielew"]["gamma"], "Prufer(3)");
    assert_eq!(v["ulm"]["entries"][0]["i"], 2);
    assert_eq!(v["ulm"]["entries"][0]["value"], "3");
    assert_eq!(v["divisible"]["rational_rank"], "aleph(1)");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "Z/"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["--degree", "0", "classify", "Q"]).code, 2);
    let omega = run(&["witness", "Z/2^w + Q"]);
    assert_eq!(omega.code, 3);
    assert!(omega.stderr.contains("omega-stable"), "{}", omega.stderr);
    assert_eq!(run(&["witness", "sumK(3; all)"]).code, 3);
    assert_eq!(run(&["witness", "sumP(all\\{2}; Z/p^1)", "--route", "padic"]).code, 3);
    assert_eq!(run(&["witness", "Zhat(5)", "--route", "socle"]).code, 3);
    assert_eq!(run(&["witness", "sumP(all\\{2}; Z/p^1)", "--window", "3"]).code, 3);
    assert_eq!(run(&["oracle", "iso", "Z/2^20", "Z/2"]).code, 4);
    assert_eq!(run(&["oracle", "ulm", "Q"]).code, 3);
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("witness"));
}

#[test]
fn padic_witness_output() {
    let v = json(&["witness", "Zhat(5)^2 + Z/9", "--seed", "1", "--samples", "30", "--tower", "3"]);
    assert_eq!(v["route"], "PAdicWitness");
    assert_eq!(v["all_hold"], true);
    assert_eq!(v["witness"]["g0"], "K0 + Z/9");
    let c = &v["witness"]["padic_sum"]["components"][0]["descriptor"];
    assert_eq!(c["p"], 5);
    assert_eq!(c["k"], 2);
    assert_eq!(c["certificate"]["verdict"]["verdict"], "pass");
}

#[test]
fn socle_witness_output() {
    let v = json(&["witness", "sumP(all; Z/p^2) + Z/4^w", "--window", "20", "--threshold", "3"]);
    assert_eq!(v["route"], "SocleWitness");
    assert_eq!(v["all_hold"], true);
    assert_eq!(v["transcript"]["modulus"], 4);
    assert_eq!(v["transcript"]["steps"].as_array().unwrap().len(), 5);
    assert_eq!(v["probes"]["tower"].as_array().unwrap().len(), 6);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["witness", "Zhat(7)", "--samples", "20", "--tower", "2"][..],
        &["witness", "sumP(all\\{2}; Z/p^1)", "--window", "20", "--threshold", "3"][..],
        &["classify", "Zhat(3) + sumP(all; Z/p^1)"][..],
    ] {
        assert_eq!(run(args), run(args), "{args:?}");
    }
}

#[test]
fn oracle_subchecks() {
    let v = json(&["oracle", "snf", "[[2,4],[6,8]]"]);
    assert_eq!(v["invariant_factors"], serde_json::json!(["2", "4"]));
    assert_eq!(v["verified"], true);
    let v = json(&["oracle", "pure", "4", "2"]);
    assert_eq!(v["pure"], false);
    assert_eq!(v["subgroup_order"], 2);
    assert_eq!(json(&["oracle", "pure", "2,4", "1,0"])["pure"], true);
    assert_eq!(json(&["oracle", "pure", "2,4", ""])["pure"], true);
    assert_eq!(json(&["oracle", "ulm", "Z/8 + Z/2^3 + Z/9"])["agree"], true);
    let v = json(&["oracle", "iso", "Z/4 + Z/2", "Z/8"]);
    assert_eq!((v["isomorphic"].clone(), v["agree"].clone()), (false.into(), true.into()));
    assert_eq!(run(&["oracle", "pure", "2,4", "1"]).code, 2);
    assert_eq!(run(&["oracle", "snf", "[[1,2],[3]]"]).code, 2);
}

#[test]
fn text_format_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["eq", "Q", "Q^w", "--format", "text", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("equivalent: true\n"), "{}", out.stdout);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved["equivalent"], true);
    let bad = run(&["eq", "Q", "Q", "--out", dir.path().join("no/such/dir.json").to_str().unwrap()]);
    assert_eq!(bad.code, 1);
}

#[test]
fn binary_matches_library() {
    let out = Command::new(env!("CARGO_BIN_EXE_abelian-sb"))
        .args(["classify", "Zhat(5)"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), run(&["classify", "Zhat(5)"]).stdout);
    let out = Command::new(env!("CARGO_BIN_EXE_abelian-sb")).args(["classify", "Z/"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
