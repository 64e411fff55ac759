use std::path::Path;
use std::process::{Command, Output};

use covering::exact::{rat, Rational};
use covering::maxdet::{identity_coordinates, invariant_subspace};
use serde_json::Value;

fn covering(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covering")).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn e8_info_is_deterministic() {
    let a = covering(&["e8", "info"]);
    let b = covering(&["--threads", "2", "e8", "info"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["shell2"], 240);
    assert_eq!(v["shell4"], 2160);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(covering(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(covering(&["rigidity"]).status.code(), Some(1));
    let r = covering(&["rigidity", "--dim", "1"]);
    assert_eq!(r.status.code(), Some(1));
    assert_eq!(json(&r)["status"], "error");
    assert_eq!(covering(&["leech", "design-check", "--norm", "6"]).status.code(), Some(1));
    assert_eq!(covering(&["--help"]).status.code(), Some(0));
    assert_eq!(covering(&["--version"]).status.code(), Some(0));
}

#[test]
fn unverified_result_exits_two() {
    // d = 2 has a two-dimensional solution space, so the rigidity check fails
    let o = covering(&["rigidity", "--dim", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["nullspace_dim"], 2);
    assert_eq!(covering(&["rigidity", "--dim", "8"]).status.code(), Some(0));
}

#[test]
fn out_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rig.json");
    let o = covering(&["rigidity", "--dim", "8", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let body: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(body["basis_is_identity"], true);
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("rig.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["exit_code"], 0);
    assert_eq!(manifest["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 1);
}

fn write_form(path: &Path, p: &[Rational; 4]) {
    let q = invariant_subspace().embed(p);
    std::fs::write(path, serde_json::to_string(&serde_json::json!({"q": q.to_strings()})).unwrap()).unwrap();
}

#[test]
fn tampered_form_is_rejected_with_named_regulator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let id = identity_coordinates();
    let witness = [rat(7, 8), rat(0, 1), rat(9, 8), rat(-1, 28)];
    let bad: [Rational; 4] = std::array::from_fn(|k| &id[k] - (&witness[k] - &id[k]) * rat(1, 1000));
    write_form(&path, &bad);
    let o = covering(&["certify", "--q", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["status"], "rejected");
    assert!(v["message"].as_str().unwrap().contains("type3"), "{v}");
}
