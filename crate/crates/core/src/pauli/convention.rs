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

use std::collections::BTreeMap;

use super::{BitString2n, PauliObservable};
use crate::error::{Error, Result};
use crate::hvm::ValueAssignment;
use crate::scheme::InferabilityClosure;

/// Relabeled observables `T'_a = λ_0(a) T_a` on the inferable set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedConvention {
    entries: BTreeMap<BitString2n, (i8, PauliObservable)>,
}

impl NormalizedConvention {
    /// Multiplier applied to the observable as realized in the closure
    /// (including the sign it carries in the measurable set).
    pub fn sign(&self, label: &BitString2n) -> Option<i8> {
        self.entries.get(label).map(|e| e.0)
    }

    /// The relabeled observable `T'_a`.
    pub fn observable(&self, label: &BitString2n) -> Option<&PauliObservable> {
        self.entries.get(label).map(|e| &e.1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitString2n, i8, &PauliObservable)> {
        self.entries.iter().map(|(l, (s, o))| (l, *s, o))
    }
}

/// Relabels the inferable observables with a consistent value assignment so
/// that `T'_a T'_b = T'_{a+b}` holds exactly on every pair inside a common
/// context. Every such pair is checked with [`PauliObservable::multiply`].
pub fn normalize_convention(closure: &InferabilityClosure, base: &ValueAssignment) -> Result<NormalizedConvention> {
    let (Some(inferable), Some(contexts)) = (closure.entries(), closure.contexts()) else {
        return Err(Error::SizeBound {
            what: "explicit convention tables",
            n: closure.num_qubits(),
            max: crate::scheme::MAX_ENUMERATED_QUBITS,
        });
    };

    let mut entries = BTreeMap::new();
    for (label, entry) in inferable {
        let lambda = base
            .base(label)
            .ok_or_else(|| Error::NotInferable(entry.observable.to_string()))?;
        let default = PauliObservable::from_label(label.clone());
        let primed = if lambda < 0 { default.negate() } else { default };
        let realized = entry.observable.sign().expect("inferable observables are Hermitian");
        entries.insert(label.clone(), (lambda * realized, primed));
    }

    for ctx in contexts {
        for (i, a) in ctx.members.iter().enumerate() {
            for b in &ctx.members[i + 1..] {
                let ta = &entries[a.label()].1;
                let tb = &entries[b.label()].1;
                let product = ta.multiply(tb)?;
                let tab = &entries[product.label()].1;
                if &product != tab {
                    return Err(Error::Normalization {
                        a: ta.to_string(),
                        b: tb.to_string(),
                        product: tab.to_string(),
                    });
                }
            }
        }
    }
    Ok(NormalizedConvention { entries })
}
