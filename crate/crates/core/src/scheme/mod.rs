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

//! State-injection schemes: the directly measurable set, free gates, the
//! inferable closure with its contexts, and the two structural checks
//! (absence of state-independent contextuality, tomographic completeness).

mod cliques;
pub mod gf2;
mod parse;

pub use parse::parse_scheme;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::hvm::ValueAssignment;
use crate::pauli::{BitString2n, Pauli1, PauliObservable};

use cliques::MaskGraph;

/// Largest measurable set handled by generic clique enumeration.
pub const MAX_ENUMERATED_OBSERVABLES: usize = 24;
/// Largest register handled by generic clique enumeration.
pub const MAX_ENUMERATED_QUBITS: usize = 5;

/// A scheme: `n` qubits, directly measurable observables and free gates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeSpec {
    n: usize,
    observables: Vec<PauliObservable>,
    gates: Vec<Gate>,
}

impl SchemeSpec {
    /// Validates observables and gates. Every gate must preserve the
    /// measurable set up to sign.
    pub fn new(n: usize, observables: Vec<PauliObservable>, gates: Vec<Gate>) -> Result<Self> {
        for o in &observables {
            if o.num_qubits() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: o.num_qubits(),
                });
            }
            if !o.is_hermitian() {
                return Err(Error::NonHermitian(o.to_string()));
            }
        }
        let spec = SchemeSpec {
            n,
            observables,
            gates: Vec::new(),
        };
        for g in &gates {
            if !check_free_gate(&spec, g)? {
                return Err(Error::NonFreeGate(g.to_string()));
            }
        }
        Ok(SchemeSpec { gates, ..spec })
    }

    /// All single-qubit Pauli measurements, ordered `X_i, Z_i` for every
    /// qubit followed by `Y_i`, with `H` and `S` on every qubit as gates.
    pub fn local(n: usize) -> Self {
        let mut observables = Vec::with_capacity(3 * n);
        for p in [Pauli1::X, Pauli1::Z] {
            for q in 0..n {
                observables.push(PauliObservable::single(n, q, p).expect("q < n"));
            }
        }
        for q in 0..n {
            observables.push(PauliObservable::single(n, q, Pauli1::Y).expect("q < n"));
        }
        let gates = (0..n).flat_map(|q| [Gate::H(q), Gate::S(q)]).collect();
        SchemeSpec { n, observables, gates }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn observables(&self) -> &[PauliObservable] {
        &self.observables
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Sign with which `label` appears in the measurable set, if it does.
    pub fn measurable_sign(&self, label: &BitString2n) -> Option<i8> {
        self.observables
            .iter()
            .find(|o| o.label() == label)
            .and_then(|o| o.sign())
    }

    /// Whether every qubit can be measured in two complementary Pauli bases,
    /// i.e. the measurable set has two anticommuting weight-one observables on
    /// each qubit.
    pub fn has_complementary_bases(&self) -> bool {
        (0..self.n).all(|q| {
            let on_q: Vec<&PauliObservable> = self
                .observables
                .iter()
                .filter(|o| o.weight() == 1 && o.factor(q) != Pauli1::I)
                .collect();
            on_q.iter()
                .enumerate()
                .any(|(i, a)| on_q[i + 1..].iter().any(|b| !a.commutes(b).unwrap_or(true)))
        })
    }

    /// Per-qubit sign flips `[X, Y, Z]` when the measurable set is exactly
    /// one signed `X`, `Y` and `Z` on every qubit.
    fn local_shape(&self) -> Option<Vec<[bool; 3]>> {
        if self.observables.len() != 3 * self.n {
            return None;
        }
        let mut seen = vec![[None::<bool>; 3]; self.n];
        for o in &self.observables {
            if o.weight() != 1 {
                return None;
            }
            let q = o.support()[0];
            let slot = match o.factor(q) {
                Pauli1::X => 0,
                Pauli1::Y => 1,
                Pauli1::Z => 2,
                Pauli1::I => unreachable!(),
            };
            if seen[q][slot].is_some() {
                return None;
            }
            seen[q][slot] = Some(o.sign() == Some(-1));
        }
        seen.into_iter().map(|s| Some([s[0]?, s[1]?, s[2]?])).collect()
    }

    pub fn is_local(&self) -> bool {
        self.local_shape().is_some()
    }
}

/// Whether conjugation by `gate` maps every measurable observable to
/// `±` a measurable observable.
pub fn check_free_gate(spec: &SchemeSpec, gate: &Gate) -> Result<bool> {
    gate.validate(spec.n)?;
    if !gate.is_clifford() {
        return Err(Error::NotClifford(gate.to_string()));
    }
    for o in &spec.observables {
        let image = gate.conjugate(o)?;
        if spec.measurable_sign(image.label()).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All maximal pairwise-commuting subsets of the measurable set, as sorted
/// index lists into `spec.observables()`.
pub fn maximal_commuting_subsets(spec: &SchemeSpec) -> Result<Vec<Vec<usize>>> {
    let obs = &spec.observables;
    if obs.len() > MAX_ENUMERATED_OBSERVABLES || spec.n > MAX_ENUMERATED_QUBITS {
        return Err(Error::EnumerationBound {
            observables: obs.len(),
            n: spec.n,
            max_observables: MAX_ENUMERATED_OBSERVABLES,
            max_qubits: MAX_ENUMERATED_QUBITS,
        });
    }
    let graph = MaskGraph::new(obs.len(), |i, j| obs[i].commutes(&obs[j]).expect("same size"));
    Ok(graph.maximal_cliques())
}

/// A jointly inferable set: every `±` product of a commuting subset of the
/// measurable set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Context {
    /// Indices into the measurable set.
    pub generators: Vec<usize>,
    /// Independent generators (a subset of `generators`) spanning the members.
    pub basis: Vec<usize>,
    /// Members with their realized signs, sorted by label.
    pub members: Vec<PauliObservable>,
    /// Product triples `(prev, generator, member)` that build every member
    /// from the basis one factor at a time.
    #[serde(skip)]
    chain: Vec<(BitString2n, BitString2n, BitString2n)>,
}

impl Context {
    pub fn contains(&self, label: &BitString2n) -> bool {
        self.members.binary_search_by(|m| m.label().cmp(label)).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InferableEntry {
    /// The observable with the sign realized by its provenance.
    pub observable: PauliObservable,
    /// Generating subset of the measurable set (sorted indices).
    pub provenance: Vec<usize>,
}

#[derive(Clone, Debug)]
enum ClosureRepr {
    Enumerated {
        inferable: BTreeMap<BitString2n, InferableEntry>,
        contexts: Vec<Context>,
    },
    /// Single-qubit Pauli measurements: every label is inferable; per-qubit
    /// sign flips of `[X, Y, Z]`.
    Local { flips: Vec<[bool; 3]> },
}

/// The inferable set `I` and its context family `J`.
#[derive(Clone, Debug)]
pub struct InferabilityClosure {
    spec: SchemeSpec,
    repr: ClosureRepr,
}

/// Computes the one-round inferability closure.
///
/// Within the enumeration bound every scheme is enumerated explicitly. The
/// local single-qubit scheme falls back to its analytic form beyond it.
pub fn closure(spec: &SchemeSpec) -> Result<InferabilityClosure> {
    match maximal_commuting_subsets(spec) {
        Ok(sets) => Ok(enumerated_closure(spec, sets)),
        Err(e @ Error::EnumerationBound { .. }) => match spec.local_shape() {
            Some(flips) => Ok(InferabilityClosure {
                spec: spec.clone(),
                repr: ClosureRepr::Local { flips },
            }),
            None => Err(e),
        },
        Err(e) => Err(e),
    }
}

/// Analytic closure for the local scheme at any size.
pub fn local_closure(spec: &SchemeSpec) -> Option<InferabilityClosure> {
    spec.local_shape().map(|flips| InferabilityClosure {
        spec: spec.clone(),
        repr: ClosureRepr::Local { flips },
    })
}

fn enumerated_closure(spec: &SchemeSpec, sets: Vec<Vec<usize>>) -> InferabilityClosure {
    let n = spec.n;
    let obs = &spec.observables;
    let mut inferable: BTreeMap<BitString2n, InferableEntry> = BTreeMap::new();
    let mut contexts = Vec::with_capacity(sets.len());

    for generators in sets {
        // greedy basis in index order
        let mut basis = Vec::new();
        // reduced row echelon form: each lead bit appears in one row only
        let mut reduced: Vec<(usize, BitString2n)> = Vec::new();
        for &g in &generators {
            let mut v = obs[g].label().clone();
            for (lead, r) in &reduced {
                if bit_at(&v, *lead) {
                    v.add_assign(r);
                }
            }
            if let Some(lead) = leading_bit(&v) {
                for (_, r) in reduced.iter_mut() {
                    if bit_at(r, lead) {
                        r.add_assign(&v);
                    }
                }
                reduced.push((lead, v));
                basis.push(g);
            }
        }

        let k = basis.len();
        let mut span: Vec<PauliObservable> = Vec::with_capacity(1 << k);
        let mut chain = Vec::new();
        span.push(PauliObservable::identity(n));
        for m in 1usize..1 << k {
            let top = usize::BITS as usize - 1 - m.leading_zeros() as usize;
            let prev = m & !(1 << top);
            let g = &obs[basis[top]];
            let member = span[prev].mul_unchecked(g);
            debug_assert!(member.is_hermitian());
            if prev != 0 {
                chain.push((span[prev].label().clone(), g.label().clone(), member.label().clone()));
            }
            span.push(member);
        }

        for (m, member) in span.iter().enumerate() {
            let provenance: Vec<usize> = (0..k).filter(|&b| m >> b & 1 == 1).map(|b| basis[b]).collect();
            let candidate = InferableEntry {
                observable: member.clone(),
                provenance,
            };
            inferable
                .entry(member.label().clone())
                .and_modify(|e| {
                    if candidate.provenance < e.provenance {
                        *e = candidate.clone();
                    }
                })
                .or_insert(candidate);
        }

        let mut members = span;
        members.sort_by(|a, b| a.label().cmp(b.label()));
        contexts.push(Context {
            generators,
            basis,
            members,
            chain,
        });
    }

    // Identity is inferable even when O is empty.
    inferable.entry(BitString2n::zero(n)).or_insert_with(|| InferableEntry {
        observable: PauliObservable::identity(n),
        provenance: Vec::new(),
    });

    InferabilityClosure {
        spec: spec.clone(),
        repr: ClosureRepr::Enumerated { inferable, contexts },
    }
}

/// Position of the first set bit, z bits before x bits.
fn leading_bit(v: &BitString2n) -> Option<usize> {
    let n = v.num_qubits();
    (0..n)
        .find(|&q| v.z(q))
        .or_else(|| (0..n).find(|&q| v.x(q)).map(|q| n + q))
}

fn bit_at(v: &BitString2n, pos: usize) -> bool {
    let n = v.num_qubits();
    if pos < n {
        v.z(pos)
    } else {
        v.x(pos - n)
    }
}

impl InferabilityClosure {
    pub fn spec(&self) -> &SchemeSpec {
        &self.spec
    }

    pub fn num_qubits(&self) -> usize {
        self.spec.n
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.repr, ClosureRepr::Local { .. })
    }

    pub fn is_inferable(&self, label: &BitString2n) -> bool {
        match &self.repr {
            ClosureRepr::Enumerated { inferable, .. } => inferable.contains_key(label),
            ClosureRepr::Local { .. } => label.num_qubits() == self.spec.n,
        }
    }

    /// The inferable observable with its realized sign.
    pub fn inferable(&self, label: &BitString2n) -> Option<PauliObservable> {
        match &self.repr {
            ClosureRepr::Enumerated { inferable, .. } => inferable.get(label).map(|e| e.observable.clone()),
            ClosureRepr::Local { flips } => {
                if label.num_qubits() != self.spec.n {
                    return None;
                }
                let o = PauliObservable::from_label(label.clone());
                let negative = (0..self.spec.n).fold(false, |acc, q| {
                    acc ^ match o.factor(q) {
                        Pauli1::I => false,
                        Pauli1::X => flips[q][0],
                        Pauli1::Y => flips[q][1],
                        Pauli1::Z => flips[q][2],
                    }
                });
                Some(if negative { o.negate() } else { o })
            }
        }
    }

    /// `|I|`.
    pub fn inferable_count(&self) -> u128 {
        match &self.repr {
            ClosureRepr::Enumerated { inferable, .. } => inferable.len() as u128,
            ClosureRepr::Local { .. } => 4u128.saturating_pow(self.spec.n as u32),
        }
    }

    /// Explicit entries; `None` for the analytic local closure.
    pub fn entries(&self) -> Option<&BTreeMap<BitString2n, InferableEntry>> {
        match &self.repr {
            ClosureRepr::Enumerated { inferable, .. } => Some(inferable),
            ClosureRepr::Local { .. } => None,
        }
    }

    /// Explicit contexts; `None` for the analytic local closure.
    pub fn contexts(&self) -> Option<&[Context]> {
        match &self.repr {
            ClosureRepr::Enumerated { contexts, .. } => Some(contexts),
            ClosureRepr::Local { .. } => None,
        }
    }

    pub fn context_count(&self) -> u128 {
        match &self.repr {
            ClosureRepr::Enumerated { contexts, .. } => contexts.len() as u128,
            ClosureRepr::Local { .. } => 3u128.saturating_pow(self.spec.n as u32),
        }
    }

    /// Whether the two labels lie in a common context.
    pub fn jointly_inferable(&self, a: &BitString2n, b: &BitString2n) -> bool {
        match &self.repr {
            ClosureRepr::Enumerated { contexts, .. } => contexts.iter().any(|c| c.contains(a) && c.contains(b)),
            // Local: per qubit the two factors must agree or one be I.
            ClosureRepr::Local { .. } => (0..self.spec.n).all(|q| {
                let fa = Pauli1::from_bits(a.z(q), a.x(q));
                let fb = Pauli1::from_bits(b.z(q), b.x(q));
                fa == Pauli1::I || fb == Pauli1::I || fa == fb
            }),
        }
    }
}

/// Condition C2: every `n`-qubit Pauli label is inferable.
pub fn check_tomographic_completeness(closure: &InferabilityClosure) -> bool {
    let n = closure.num_qubits();
    match &closure.repr {
        ClosureRepr::Local { .. } => true,
        ClosureRepr::Enumerated { inferable, .. } => n < 64 && inferable.len() as u128 == 1u128 << (2 * n),
    }
}

/// One equation of the consistency system: the labels' sign variables sum
/// to `rhs` over GF(2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateEquation {
    pub terms: Vec<PauliObservable>,
    pub rhs: u8,
}

/// Equations whose GF(2) sum reads `0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfeasibilityCertificate {
    pub equations: Vec<CertificateEquation>,
}

impl InfeasibilityCertificate {
    /// Checks that every label occurs an even number of times and the
    /// right-hand sides sum to 1.
    pub fn is_valid(&self) -> bool {
        let mut count: HashMap<&BitString2n, usize> = HashMap::new();
        let mut rhs = 0u8;
        for eq in &self.equations {
            for t in &eq.terms {
                *count.entry(t.label()).or_default() += 1;
            }
            rhs ^= eq.rhs & 1;
        }
        !self.equations.is_empty() && rhs == 1 && count.values().all(|c| c % 2 == 0)
    }
}

#[derive(Clone, Debug)]
pub enum SicOutcome {
    /// A consistent value assignment `λ_0` (condition C1 holds).
    Consistent(ValueAssignment),
    /// No consistent assignment exists.
    Infeasible(InfeasibilityCertificate),
}

impl SicOutcome {
    pub fn is_consistent(&self) -> bool {
        matches!(self, SicOutcome::Consistent(_))
    }
}

/// `β(a, b)`: `T_a T_b = (-1)^β T_{a+b}` under the default convention.
/// Only meaningful for commuting labels.
pub fn product_sign_bit(a: &BitString2n, b: &BitString2n) -> bool {
    let p = PauliObservable::from_label(a.clone()).mul_unchecked(&PauliObservable::from_label(b.clone()));
    debug_assert!(p.is_hermitian());
    p.phase() == 2
}

/// Builds the consistency system over the inferable labels.
///
/// Variables are indexed by the sorted order of inferable labels. Returns the
/// system and the label of every variable.
pub fn consistency_system(closure: &InferabilityClosure) -> Option<(gf2::System, Vec<BitString2n>)> {
    let ClosureRepr::Enumerated { inferable, contexts } = &closure.repr else {
        return None;
    };
    let labels: Vec<BitString2n> = inferable.keys().cloned().collect();
    let index: HashMap<&BitString2n, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut system = gf2::System::new(labels.len());
    system.push(vec![index[&BitString2n::zero(closure.num_qubits())]], false);
    let mut seen = std::collections::HashSet::new();
    for ctx in contexts {
        for (a, b, c) in &ctx.chain {
            let mut vars = vec![index[a], index[b], index[c]];
            vars.sort_unstable();
            let rhs = product_sign_bit(a, b);
            if seen.insert((vars.clone(), rhs)) {
                system.push(vars, rhs);
            }
        }
    }
    Some((system, labels))
}

/// Condition C1: looks for a consistent value assignment on the inferable
/// set by solving the GF(2) product-rule system.
pub fn check_absence_of_sic(closure: &InferabilityClosure) -> SicOutcome {
    let n = closure.num_qubits();
    let Some((system, labels)) = consistency_system(closure) else {
        return SicOutcome::Consistent(ValueAssignment::constant(n));
    };
    match system.solve() {
        gf2::Solution::Solved(values) => {
            let signs = labels.into_iter().zip(values).collect();
            SicOutcome::Consistent(ValueAssignment::table(n, signs))
        }
        gf2::Solution::Infeasible(subset) => {
            let equations = subset
                .into_iter()
                .map(|i| {
                    let eq = &system.equations()[i];
                    CertificateEquation {
                        terms: eq
                            .vars
                            .iter()
                            .map(|&v| PauliObservable::from_label(labels[v].clone()))
                            .collect(),
                        rhs: eq.rhs as u8,
                    }
                })
                .collect();
            SicOutcome::Infeasible(InfeasibilityCertificate { equations })
        }
    }
}

/// Summary of a scheme analysis.
#[derive(Clone, Debug, Serialize)]
pub struct SchemeReport {
    pub n: usize,
    pub c1: bool,
    pub c2: bool,
    pub inferable_count: u128,
    pub context_count: u128,
    /// Context generator sets as observable strings (omitted for the analytic
    /// local closure).
    pub contexts: Option<Vec<Vec<String>>>,
    pub certificate: Option<InfeasibilityCertificate>,
    pub complementary_bases: bool,
    pub analytic: bool,
}

pub fn analyze(spec: &SchemeSpec) -> Result<SchemeReport> {
    let cl = closure(spec)?;
    let sic = check_absence_of_sic(&cl);
    let contexts = cl.contexts().map(|cs| {
        cs.iter()
            .map(|c| c.generators.iter().map(|&g| spec.observables[g].to_string()).collect())
            .collect()
    });
    Ok(SchemeReport {
        n: spec.n,
        c1: sic.is_consistent(),
        c2: check_tomographic_completeness(&cl),
        inferable_count: cl.inferable_count(),
        context_count: cl.context_count(),
        contexts,
        certificate: match sic {
            SicOutcome::Infeasible(c) => Some(c),
            SicOutcome::Consistent(_) => None,
        },
        complementary_bases: spec.has_complementary_bases(),
        analytic: cl.is_analytic(),
    })
}
