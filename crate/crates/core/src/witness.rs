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

//! Mermin GHZ witness: `⟨XXX⟩ − ⟨XZZ⟩ − ⟨ZXZ⟩ − ⟨ZZX⟩`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{ghz_state, DenseState};
use crate::pauli::{Pauli1, PauliObservable};
use crate::scheme::SchemeSpec;

/// Correlators of the witness with their coefficients.
pub fn mermin_terms() -> [(i32, PauliObservable); 4] {
    use Pauli1::{X, Z};
    [
        (1, PauliObservable::from_factors(&[X, X, X])),
        (-1, PauliObservable::from_factors(&[X, Z, Z])),
        (-1, PauliObservable::from_factors(&[Z, X, Z])),
        (-1, PauliObservable::from_factors(&[Z, Z, X])),
    ]
}

/// Signed generators whose joint +1 eigenstate is the GHZ state.
pub fn mermin_ghz_stabilizers() -> Vec<PauliObservable> {
    mermin_terms()
        .into_iter()
        .map(|(c, t)| if c < 0 { t.negate() } else { t })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessTerm {
    pub correlator: String,
    pub coefficient: i32,
    pub expectation: f64,
}

pub fn mermin_quantum_value(state: &DenseState) -> Result<f64> {
    Ok(witness_terms(state)?
        .iter()
        .map(|t| t.coefficient as f64 * t.expectation)
        .sum())
}

fn witness_terms(state: &DenseState) -> Result<Vec<WitnessTerm>> {
    if state.num_qubits() != 3 {
        return Err(Error::Dimension {
            expected: 3,
            found: state.num_qubits(),
        });
    }
    mermin_terms()
        .iter()
        .map(|(c, t)| {
            Ok(WitnessTerm {
                correlator: t.to_string(),
                coefficient: *c,
                expectation: state.pauli_expectation(t)?,
            })
        })
        .collect()
}

/// Exhaustive noncontextual bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HvmBound {
    pub max: i32,
    /// First maximizing assignment, ordered `X1 X2 X3 Z1 Z2 Z3`.
    pub assignment: [i8; 6],
    pub optimal_count: usize,
}

/// Maximizes the witness over all `2^6` value assignments to the local
/// observables `X_i, Z_i`; each correlator takes the product of its factors.
pub fn mermin_hvm_bound() -> HvmBound {
    let mut best: Option<HvmBound> = None;
    for mask in 0u32..64 {
        let v: [i8; 6] = std::array::from_fn(|i| if mask >> i & 1 == 1 { -1 } else { 1 });
        let value = mermin_value_of(&v);
        match &mut best {
            Some(b) if value < b.max => {}
            Some(b) if value == b.max => b.optimal_count += 1,
            _ => {
                best = Some(HvmBound {
                    max: value,
                    assignment: v,
                    optimal_count: 1,
                })
            }
        }
    }
    best.expect("64 assignments")
}

/// Witness value of an assignment `[X1, X2, X3, Z1, Z2, Z3]`.
pub fn mermin_value_of(v: &[i8; 6]) -> i32 {
    let [x1, x2, x3, z1, z2, z3] = v.map(i32::from);
    x1 * x2 * x3 - x1 * z2 * z3 - z1 * x2 * z3 - z1 * z2 * x3
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MerminReport {
    pub quantum_value: f64,
    pub hvm_max: f64,
    pub gap: f64,
    pub terms: Vec<WitnessTerm>,
    pub hvm_assignment: [i8; 6],
    pub hvm_optimal_count: usize,
}

impl MerminReport {
    pub fn table(&self) -> String {
        let mut out = String::from("correlator  coeff  expectation\n");
        for t in &self.terms {
            out.push_str(&format!(
                "{:<10}  {:>+5}  {:>+11.9}\n",
                t.correlator, t.coefficient, t.expectation
            ));
        }
        out.push_str(&format!("quantum value   {:+.9}\n", self.quantum_value));
        out.push_str(&format!(
            "hvm bound       {:+.9}  ({} optimal assignments)\n",
            self.hvm_max, self.hvm_optimal_count
        ));
        out.push_str(&format!("gap             {:+.9}\n", self.gap));
        out
    }
}

/// Quantum value on `state` against the noncontextual bound. Every single-qubit
/// factor of the correlators must be measurable in `scheme`.
pub fn contextuality_gap(scheme: &SchemeSpec, state: &DenseState) -> Result<MerminReport> {
    if scheme.num_qubits() != 3 {
        return Err(Error::Dimension {
            expected: 3,
            found: scheme.num_qubits(),
        });
    }
    for q in 0..3 {
        for f in [Pauli1::X, Pauli1::Z] {
            let o = PauliObservable::single(3, q, f)?;
            if scheme.measurable_sign(o.label()).is_none() {
                return Err(Error::NotMeasurable(o.to_string()));
            }
        }
    }
    let terms = witness_terms(state)?;
    let quantum_value = terms.iter().map(|t| t.coefficient as f64 * t.expectation).sum();
    let bound = mermin_hvm_bound();
    Ok(MerminReport {
        quantum_value,
        hvm_max: bound.max as f64,
        gap: quantum_value - bound.max as f64,
        terms,
        hvm_assignment: bound.assignment,
        hvm_optimal_count: bound.optimal_count,
    })
}

/// Report for the GHZ state mixed with `I/8` at strength `noise`.
pub fn ghz_report(noise: f64) -> Result<MerminReport> {
    let state = if noise == 0.0 {
        ghz_state()
    } else {
        ghz_state().depolarize(noise)?
    };
    contextuality_gap(&SchemeSpec::local(3), &state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::Gate;
    use crate::oracle::StatePrep;

    #[test]
    fn quantum_values() {
        assert!((mermin_quantum_value(&ghz_state()).unwrap() - 4.0).abs() < 1e-9);
        let ghz = DenseState::prepare(&StatePrep::Stabilizers(mermin_ghz_stabilizers()), 3).unwrap();
        assert!((mermin_quantum_value(&ghz).unwrap() - 4.0).abs() < 1e-9);
        assert_eq!(mermin_quantum_value(&DenseState::zeros(3).unwrap()).unwrap(), 0.0);
        assert_eq!(
            mermin_quantum_value(&DenseState::maximally_mixed(3).unwrap()).unwrap(),
            0.0
        );
        assert!(mermin_quantum_value(&DenseState::zeros(2).unwrap()).is_err());
    }

    #[test]
    fn bound_is_two() {
        let b = mermin_hvm_bound();
        assert_eq!(b.max, 2);
        assert_eq!(mermin_value_of(&b.assignment), 2);
        assert_eq!(mermin_value_of(&[1; 6]), -2);
        // four of the eight correlator sign patterns with product +1 reach 2,
        // each with 8 preimages
        assert_eq!(b.optimal_count, 32);
    }

    #[test]
    fn gaps() {
        let local = SchemeSpec::local(3);
        assert!((contextuality_gap(&local, &ghz_state()).unwrap().gap - 2.0).abs() < 1e-9);
        let mm = DenseState::maximally_mixed(3).unwrap();
        assert_eq!(contextuality_gap(&local, &mm).unwrap().gap, -2.0);
        assert_eq!(
            contextuality_gap(&local, &DenseState::zeros(3).unwrap()).unwrap().gap,
            -2.0
        );
        let xs = SchemeSpec::new(3, ["XII", "IXI", "IIX"].map(|s| s.parse().unwrap()).to_vec(), vec![]).unwrap();
        assert!(matches!(contextuality_gap(&xs, &mm), Err(Error::NotMeasurable(_))));
    }

    #[test]
    fn computational_basis_states_do_not_violate() {
        for k in 0..8 {
            let mut s = DenseState::zeros(3).unwrap();
            for q in 0..3 {
                if k >> q & 1 == 1 {
                    s.apply_gate(&Gate::X(q)).unwrap();
                }
            }
            let v = mermin_quantum_value(&s).unwrap();
            assert!((-2.0..=2.0).contains(&v));
        }
    }

    #[test]
    fn depolarized_ghz_keeps_a_gap() {
        for eps in [0.05, 0.1, 0.2] {
            let r = ghz_report(eps).unwrap();
            assert!(r.quantum_value > 2.0);
            assert!((r.quantum_value - 4.0 * (1.0 - eps)).abs() < 1e-9);
        }
        assert!(ghz_report(0.25).unwrap().quantum_value <= 3.0 + 1e-9);
        assert!(ghz_report(-0.1).is_err());
    }

    #[test]
    fn table_mentions_every_term() {
        let t = ghz_report(0.0).unwrap().table();
        for c in ["+XXX", "+XZZ", "+ZXZ", "+ZZX", "gap"] {
            assert!(t.contains(c), "{t}");
        }
    }
}
