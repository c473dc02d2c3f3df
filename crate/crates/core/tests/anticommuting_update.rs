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

//! After an update on `a`, every inferable label anticommuting with `a` has
//! model expectation exactly zero.

use proptest::prelude::*;
use qcsi_lab::hvm::{exact_measure_update, HiddenVariableModel, HvmDistribution};
use qcsi_lab::pauli::{symplectic_form, BitString2n, PauliObservable};
use qcsi_lab::scheme::SchemeSpec;

fn table(n: usize, weights: &[f64]) -> HvmDistribution {
    let w = &weights[..1 << (2 * n)];
    let total: f64 = w.iter().sum();
    HvmDistribution::from_table(n, w.iter().map(|x| x / total).collect()).unwrap()
}

fn check_anticommuting_vanish(
    model: &HiddenVariableModel,
    q: &HvmDistribution,
    a: &PauliObservable,
    s: i8,
) -> Result<(), TestCaseError> {
    let Ok((_, next)) = exact_measure_update(model, q, a, s) else {
        return Ok(());
    };
    prop_assert!((next.total() - 1.0).abs() < 1e-12);
    for b in BitString2n::all(model.num_qubits()) {
        if !model.closure().is_inferable(&b) || !symplectic_form(&b, a.label()).unwrap() {
            continue;
        }
        let e = model.expectation(&next, &PauliObservable::from_label(b), 1.0).unwrap();
        prop_assert_eq!(e, 0.0);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn local_scheme(
        n in 1usize..=3,
        weights in prop::collection::vec(0.0f64..1.0, 64),
        q in 0usize..3,
        f in 0usize..3,
        neg in any::<bool>(),
        plus in any::<bool>(),
    ) {
        let q = q % n;
        let model = HiddenVariableModel::local(n);
        let mut text: String = (0..n).map(|i| if i == q { ['X', 'Y', 'Z'][f] } else { 'I' }).collect();
        if neg {
            text.insert(0, '-');
        }
        let a: PauliObservable = text.parse().unwrap();
        check_anticommuting_vanish(&model, &table(n, &weights), &a, if plus { 1 } else { -1 })?;
    }

    #[test]
    fn nonlocal_scheme(
        weights in prop::collection::vec(0.0f64..1.0, 16),
        k in 0usize..4,
        plus in any::<bool>(),
    ) {
        let obs: Vec<PauliObservable> = ["XX", "ZZ", "YI", "-IY"].iter().map(|s| s.parse().unwrap()).collect();
        let model = HiddenVariableModel::for_scheme(&SchemeSpec::new(2, obs.clone(), vec![]).unwrap()).unwrap();
        check_anticommuting_vanish(&model, &table(2, &weights), &obs[k], if plus { 1 } else { -1 })?;
    }
}
