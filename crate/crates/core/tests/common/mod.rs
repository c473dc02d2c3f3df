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

//! Shared helpers: dense Pauli matrices built from Kronecker products, used
//! as an independent reference for the symplectic algebra.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use qcsi_lab::pauli::PauliObservable;
use rand::Rng;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn factor(ch: char) -> DMatrix<C> {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let e = match ch {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, -i, i, z],
        'Z' => [o, z, z, -o],
        other => panic!("bad factor {other}"),
    };
    DMatrix::from_row_slice(2, 2, &e)
}

/// Dense matrix of a signed Pauli string. Character `q` acts on qubit `q`,
/// which is bit `q` of the basis index.
pub fn dense_pauli(text: &str) -> DMatrix<C> {
    let (sign, body) = match text.chars().next() {
        Some('-') => (-1.0, &text[1..]),
        Some('+') => (1.0, &text[1..]),
        _ => (1.0, text),
    };
    let mut m = DMatrix::from_element(1, 1, c(sign, 0.0));
    for ch in body.chars() {
        // qubit 0 is the least significant factor
        m = factor(ch).kronecker(&m);
    }
    m
}

pub fn dense(p: &PauliObservable) -> DMatrix<C> {
    dense_pauli(&p.to_string())
}

pub fn is_scalar_multiple_of_identity(m: &DMatrix<C>, scalar: C) -> bool {
    let id = DMatrix::<C>::identity(m.nrows(), m.ncols()) * scalar;
    (m - id).iter().all(|e| e.norm() < 1e-12)
}

pub fn approx_eq(a: &DMatrix<C>, b: &DMatrix<C>) -> bool {
    (a - b).iter().all(|e| e.norm() < 1e-12)
}

/// Random single-qubit Pauli observable on `n` qubits, with a random sign.
pub fn random_local<R: Rng>(rng: &mut R, n: usize) -> PauliObservable {
    let q = rng.random_range(0..n);
    let f = ['X', 'Y', 'Z'][rng.random_range(0..3)];
    let mut s: String = (0..n).map(|i| if i == q { f } else { 'I' }).collect();
    if rng.random::<bool>() {
        s.insert(0, '-');
    }
    s.parse().unwrap()
}

/// Largest per-string difference between two outcome distributions.
pub fn distribution_distance(
    a: &std::collections::BTreeMap<String, f64>,
    b: &std::collections::BTreeMap<String, f64>,
) -> f64 {
    a.keys()
        .chain(b.keys())
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}
