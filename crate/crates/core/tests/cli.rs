// Copyright 2026 The qcsi-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! End-to-end runs of the `qcsi-lab` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qcsi-lab"));
    c.current_dir(env!("CARGO_MANIFEST_DIR"));
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{l}: {e}")))
        .collect()
}

fn fixture(kind: &str, name: &str) -> String {
    let p: PathBuf = ["fixtures", kind, name].iter().collect();
    p.display().to_string()
}

#[test]
fn scheme_check_reports_conditions() {
    let cases = [
        ("local2.scheme", true, true),
        ("local3.scheme", true, true),
        ("xz2.scheme", true, false),
        ("all15.scheme", false, true),
    ];
    for (name, c1, c2) in cases {
        let out = run(&["scheme", "check", "--scheme", &fixture("schemes", name)]);
        assert!(out.status.success(), "{name}");
        let r = records(&out).pop().unwrap();
        assert_eq!(r["record"], "scheme_check");
        assert_eq!(r["c1"], c1, "{name}");
        assert_eq!(r["c2"], c2, "{name}");
        assert_eq!(r["certificate"].is_null(), c1);
        assert_eq!(r["config"]["scheme"], fixture("schemes", name));
    }
}

#[test]
fn witness_and_oracle() {
    let r = records(&run(&["witness", "ghz"])).pop().unwrap();
    assert!((r["quantum"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    assert_eq!(r["hvm_bound"].as_f64(), Some(2.0));
    let r = records(&run(&["witness", "ghz", "--noise", "0.2"])).pop().unwrap();
    assert!((r["quantum"].as_f64().unwrap() - 3.2).abs() < 1e-9);
    let out = run(&["witness", "ghz", "--noise", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let r = records(&run(&["oracle", "expect", "--state", "zeros", "--observable", "ZIZ"]))
        .pop()
        .unwrap();
    assert_eq!(r["expectation"].as_f64(), Some(1.0));
    let r = records(&run(&["oracle", "expect", "--state", "mixed", "--observable", "-XY"]))
        .pop()
        .unwrap();
    assert_eq!(r["expectation"].as_f64(), Some(0.0));
}

#[test]
fn oracle_dump_reproduces_stabilizers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("amps.json");
    let out = run(&[
        "oracle",
        "expect",
        "--state",
        "ghz",
        "--observable",
        "XXX",
        "--dump",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let dump: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let e = dump["entries"].as_array().unwrap();
    assert_eq!(e.len(), 8);
    let amps: Vec<(f64, f64)> = e
        .iter()
        .map(|v| (v[0].as_f64().unwrap(), v[1].as_f64().unwrap()))
        .collect();
    // ⟨ψ|P|ψ⟩ for real-amplitude X/Z strings, qubit i = bit i of the index
    let expect = |sign: f64, x: usize, z: usize| -> f64 {
        (0..8)
            .map(|k| {
                let (a, b) = (amps[k], amps[k ^ x]);
                let parity = if ((k & z).count_ones() % 2) == 1 { -1.0 } else { 1.0 };
                sign * parity * (a.0 * b.0 + a.1 * b.1)
            })
            .sum()
    };
    assert!((expect(1.0, 0b111, 0) - 1.0).abs() < 1e-12);
    assert!((expect(-1.0, 0b001, 0b110) - 1.0).abs() < 1e-12);
    assert!((expect(-1.0, 0b010, 0b101) - 1.0).abs() < 1e-12);
    assert!((expect(-1.0, 0b100, 0b011) - 1.0).abs() < 1e-12);
}

#[test]
fn hvm_exact_probabilities() {
    let args = |o: &str| {
        vec![
            "hvm".to_string(),
            "exact".into(),
            "--scheme".into(),
            fixture("schemes", "local2.scheme"),
            "--circuit".into(),
            fixture("circuits", "hadamard_z.circuit"),
            "--outcomes".into(),
            o.into(),
        ]
    };
    let out = bin().args(args("+-+-")).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&out);
    let steps: Vec<&Value> = recs.iter().filter(|r| r["record"] == "hvm_step").collect();
    assert_eq!(steps.len(), 4);
    let ps: Vec<f64> = steps.iter().map(|r| r["model_p"].as_f64().unwrap()).collect();
    assert_eq!(ps, vec![0.5, 0.5, 0.5, 1.0]);
    assert_eq!(recs.last().unwrap()["joint_probability"].as_f64(), Some(0.125));

    let out = bin().args(args("++++")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(records(&out)[0]["kind"], "impossible_outcome");
}

#[test]
fn hvm_sample_is_deterministic_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("r.json");
    let csv_path = dir.path().join("r.csv");
    let base = |out: &std::path::Path| {
        vec![
            "hvm".to_string(),
            "sample".into(),
            "--scheme".into(),
            fixture("schemes", "local2.scheme"),
            "--circuit".into(),
            fixture("circuits", "x_then_z.circuit"),
            "--shots".into(),
            "20000".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    let a = bin().args(base(&json_path)).output().unwrap();
    let b = bin()
        .args(base(&json_path))
        .env("QCSI_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(doc["config"]["seed"], 7);
    let hist = doc["histogram"].as_object().unwrap();
    assert_eq!(hist.values().map(|v| v.as_u64().unwrap()).sum::<u64>(), 20000);
    for v in hist.values() {
        let f = v.as_u64().unwrap() as f64 / 20000.0;
        assert!((f - 0.25).abs() < 4.0 * (0.25f64 * 0.75 / 20000.0).sqrt());
    }

    let c = bin().args(base(&csv_path)).output().unwrap();
    assert!(c.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().next(), Some("step,label,outcome,model_p"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn errors_are_records_with_nonzero_status() {
    let out = run(&["hvm", "sample", "--scheme", "x", "--circuit", "y", "--shots", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(records(&out)[0]["kind"], "usage");

    let out = run(&["scheme", "check", "--scheme", "does/not/exist.scheme"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(records(&out)[0]["kind"], "io");

    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "hvm",
        "exact",
        "--scheme",
        &fixture("schemes", "all15.scheme"),
        "--circuit",
        &fixture("circuits", "x_then_z.circuit"),
        "--outcomes",
        "++",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(records(&out)[0]["kind"], "contextual");

    let out = run(&["oracle", "expect", "--state", "zeros", "--observable", "XQ"]);
    assert_eq!(records(&out)[0]["kind"], "parse");
}

#[test]
fn mbqc_demo_reports_fidelity() {
    for cell in ["a", "b"] {
        let out = run(&["mbqc", "demo", "--cell", cell, "--trials", "3", "--seed", "11"]);
        assert!(out.status.success());
        let r = records(&out).pop().unwrap();
        assert!(r["verify"]["min_fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
        assert_eq!(r["config"]["cell"], cell);
        let again = run(&["mbqc", "demo", "--cell", cell, "--trials", "3", "--seed", "11"]);
        assert_eq!(out.stdout, again.stdout);
    }
    let r = records(&run(&[
        "mbqc",
        "demo",
        "--fixture",
        &fixture("mbqc", "two_red_wire.json"),
        "--trials",
        "2",
    ]))
    .pop()
    .unwrap();
    assert_eq!(r["cell"], "two-red");
    assert!(r["red_site"]["max_probability_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn table_output_follows_records() {
    let out = run(&["witness", "ghz", "--table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('{'));
    assert!(text.contains("quantum value"));
}
