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

//! Shipped scheme files and independent checks of infeasibility certificates.

mod common;

use std::path::PathBuf;

use common::*;
use qcsi_lab::scheme::{analyze, parse_scheme, SchemeSpec};

fn fixture(name: &str) -> SchemeSpec {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", "schemes", name]
        .iter()
        .collect();
    parse_scheme(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn local_schemes_satisfy_both_conditions() {
    for (name, n) in [("local2.scheme", 2), ("local3.scheme", 3)] {
        let spec = fixture(name);
        assert_eq!(spec, SchemeSpec::local(n));
        let r = analyze(&spec).unwrap();
        assert!(r.c1 && r.c2, "{name}");
        assert_eq!(r.inferable_count, 1 << (2 * n));
    }
}

#[test]
fn xz_scheme_is_incomplete() {
    let r = analyze(&fixture("xz2.scheme")).unwrap();
    assert!(r.c1);
    assert!(!r.c2);
    assert_eq!(r.inferable_count, 9);
}

#[test]
fn certificate_is_an_operator_identity() {
    let r = analyze(&fixture("all15.scheme")).unwrap();
    assert!(!r.c1);
    let cert = r.certificate.unwrap();
    assert!(cert.is_valid());
    // each equation is a genuine product identity among commuting Paulis
    for eq in &cert.equations {
        let mats: Vec<_> = eq.terms.iter().map(dense).collect();
        for a in &mats {
            for b in &mats {
                assert!(approx_eq(&(a * b), &(b * a)));
            }
        }
        let prod = mats.iter().skip(1).fold(mats[0].clone(), |acc, m| acc * m);
        let sign = if eq.rhs == 1 { -1.0 } else { 1.0 };
        assert!(is_scalar_multiple_of_identity(&prod, c(sign, 0.0)), "{eq:?}");
    }
    // and the system is small: a Peres-Mermin-style contradiction
    assert!(cert.equations.len() <= 10);
}

#[test]
fn report_serializes() {
    let r = analyze(&fixture("local2.scheme")).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["c1"], serde_json::json!(true));
    assert_eq!(v["c2"], serde_json::json!(true));
}
