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

//! Noncontextual hidden-variable models on the internal state space
//! `Z_2^{2n}`.
//!
//! A model is a base value assignment `λ_0` on the inferable labels together
//! with the translation action `λ_ν(a) = λ_0(a)·(-1)^{[ν,a]}`, and a
//! probability table `q` over `ν`. Measuring `T_a` with outcome `s` maps `q`
//! to
//!
//! ```text
//!     q'(ν) = [λ_ν(a) = s] · (q(ν) + q(ν + a)) / (2p),    p = (1 + s⟨T_a⟩) / 2
//! ```
//!
//! and the single-trajectory walker emits `λ_ν(a)` and then flips `ν → ν + a`
//! with probability one half.

mod circuit;
mod sampler;

pub use circuit::{
    exact_joint_distribution, exact_outcome_chain, parse_circuit, simulate_circuit_hvm, Circuit, CircuitOp, HvmPrior,
    SampleSummary, StepSummary,
};
pub use sampler::{shot_rng, HvmSampler, TrajectoryRecord};

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::pauli::{symplectic_index, symplectic_unchecked, BitString2n, PauliObservable};
use crate::scheme::{self, InferabilityClosure, SchemeSpec, SicOutcome};

/// Dense probability tables are limited to this many qubits (`4^8` entries).
pub const MAX_DENSE_QUBITS: usize = 8;

/// Probabilities below this are treated as impossible outcomes.
pub const IMPOSSIBLE_OUTCOME: f64 = 1e-12;

/// Base value assignment `λ_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueAssignment {
    /// `λ_0 ≡ +1` on every label.
    Constant { n: usize },
    /// `λ_0(a) = (-1)^{negative[a]}` on an explicit label set.
    Table {
        n: usize,
        negative: HashMap<BitString2n, bool>,
    },
}

impl ValueAssignment {
    pub fn constant(n: usize) -> Self {
        ValueAssignment::Constant { n }
    }

    pub fn table(n: usize, negative: BTreeMap<BitString2n, bool>) -> Self {
        ValueAssignment::Table {
            n,
            negative: negative.into_iter().collect(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            ValueAssignment::Constant { n } | ValueAssignment::Table { n, .. } => *n,
        }
    }

    /// `λ_0(a)` for the default-convention operator `T_a`.
    pub fn base(&self, label: &BitString2n) -> Option<i8> {
        if label.num_qubits() != self.num_qubits() {
            return None;
        }
        match self {
            ValueAssignment::Constant { .. } => Some(1),
            ValueAssignment::Table { negative, .. } => negative.get(label).map(|&neg| if neg { -1 } else { 1 }),
        }
    }

    /// `λ_0` of a signed observable.
    fn base_signed(&self, a: &PauliObservable) -> Result<i8> {
        let sign = a.sign().ok_or_else(|| Error::NonHermitian(a.to_string()))?;
        let b = self.base(a.label()).ok_or_else(|| Error::NotInferable(a.to_string()))?;
        Ok(sign * b)
    }
}

/// `λ_ν(a) = λ_0(a) · (-1)^{[ν, a]}` for a signed observable `a`.
pub fn assignment_value(lambda: &ValueAssignment, nu: &BitString2n, a: &PauliObservable) -> Result<i8> {
    if nu.num_qubits() != lambda.num_qubits() {
        return Err(Error::Dimension {
            expected: lambda.num_qubits(),
            found: nu.num_qubits(),
        });
    }
    let b = lambda.base_signed(a)?;
    Ok(if symplectic_unchecked(nu, a.label()) { -b } else { b })
}

/// Probability table over `ν ∈ Z_2^{2n}`, indexed by [`BitString2n::to_index`].
#[derive(Clone, Debug, PartialEq)]
pub struct HvmDistribution {
    n: usize,
    q: Vec<f64>,
}

impl HvmDistribution {
    fn check_n(n: usize) -> Result<()> {
        if n > MAX_DENSE_QUBITS {
            return Err(Error::SizeBound {
                what: "dense hidden-variable tables",
                n,
                max: MAX_DENSE_QUBITS,
            });
        }
        Ok(())
    }

    /// The uniform table, which represents `I / 2^n`.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::check_n(n)?;
        let len = 1usize << (2 * n);
        Ok(HvmDistribution {
            n,
            q: vec![1.0 / len as f64; len],
        })
    }

    pub fn point_mass(nu: &BitString2n) -> Result<Self> {
        let n = nu.num_qubits();
        Self::check_n(n)?;
        let mut q = vec![0.0; 1 << (2 * n)];
        q[nu.to_index()] = 1.0;
        Ok(HvmDistribution { n, q })
    }

    /// Validates non-negativity and normalization (within `1e-12`).
    pub fn from_table(n: usize, q: Vec<f64>) -> Result<Self> {
        Self::check_n(n)?;
        if q.len() != 1 << (2 * n) {
            return Err(Error::Usage(format!(
                "table for {n} qubits needs {} entries, got {}",
                1usize << (2 * n),
                q.len()
            )));
        }
        if q.iter().any(|&p| p.is_nan() || p < 0.0) {
            return Err(Error::Usage("probabilities must be non-negative".into()));
        }
        let total: f64 = q.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Usage(format!("probabilities sum to {total}, not 1")));
        }
        Ok(HvmDistribution { n, q })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.q
    }

    pub fn probability(&self, nu: &BitString2n) -> f64 {
        self.q[nu.to_index()]
    }

    pub fn total(&self) -> f64 {
        self.q.iter().sum()
    }

    /// `q(· + u)`: the distribution of `ν + u` when `ν ~ q`.
    pub fn translate(&self, u: &BitString2n) -> Self {
        let shift = u.to_index();
        let mut q = vec![0.0; self.q.len()];
        for (i, &p) in self.q.iter().enumerate() {
            q[i ^ shift] = p;
        }
        HvmDistribution { n: self.n, q }
    }

    /// `Σ_ν q(ν) (-1)^{[ν, a]}`.
    ///
    /// Both signed parts are summed in sorted order, so two parts holding the
    /// same multiset of values cancel to exactly zero.
    fn character(&self, a: &BitString2n) -> f64 {
        let ai = a.to_index();
        let mut plus = Vec::with_capacity(self.q.len());
        let mut minus = Vec::with_capacity(self.q.len());
        for (nu, &p) in self.q.iter().enumerate() {
            if symplectic_index(nu, ai, self.n) {
                minus.push(p);
            } else {
                plus.push(p);
            }
        }
        plus.sort_unstable_by(f64::total_cmp);
        minus.sort_unstable_by(f64::total_cmp);
        plus.iter().sum::<f64>() - minus.iter().sum::<f64>()
    }
}

/// `α · Σ_ν q(ν) λ_ν(a)`.
pub fn hvm_expectation(q: &HvmDistribution, lambda: &ValueAssignment, a: &PauliObservable, alpha: f64) -> Result<f64> {
    if a.num_qubits() != q.n {
        return Err(Error::Dimension {
            expected: q.n,
            found: a.num_qubits(),
        });
    }
    let b = lambda.base_signed(a)?;
    Ok(alpha * b as f64 * q.character(a.label()))
}

/// Uniform distribution with `λ_0 ≡ +1`: the model for `I / 2^n` under
/// single-qubit Pauli measurements.
pub fn local_scheme_hvm(n: usize) -> Result<(HvmDistribution, ValueAssignment)> {
    if n == 0 {
        return Err(Error::Usage("local scheme needs at least one qubit".into()));
    }
    Ok((HvmDistribution::uniform(n)?, ValueAssignment::constant(n)))
}

/// A scheme together with a consistent value assignment on its inferable set.
#[derive(Clone, Debug)]
pub struct HiddenVariableModel {
    closure: InferabilityClosure,
    assignment: ValueAssignment,
}

impl HiddenVariableModel {
    /// Builds the model for a scheme satisfying C1.
    pub fn for_scheme(spec: &SchemeSpec) -> Result<Self> {
        let closure = scheme::closure(spec)?;
        match scheme::check_absence_of_sic(&closure) {
            SicOutcome::Consistent(assignment) => Ok(HiddenVariableModel { closure, assignment }),
            SicOutcome::Infeasible(_) => Err(Error::Contextual),
        }
    }

    /// The local scheme with `λ_0 ≡ +1`, for any `n`.
    pub fn local(n: usize) -> Self {
        let spec = SchemeSpec::local(n);
        let closure = scheme::local_closure(&spec).expect("local scheme has local shape");
        HiddenVariableModel {
            closure,
            assignment: ValueAssignment::constant(n),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.closure.num_qubits()
    }

    pub fn spec(&self) -> &SchemeSpec {
        self.closure.spec()
    }

    pub fn closure(&self) -> &InferabilityClosure {
        &self.closure
    }

    pub fn assignment(&self) -> &ValueAssignment {
        &self.assignment
    }

    /// `λ_ν(a)` restricted to inferable `a`.
    pub fn value(&self, nu: &BitString2n, a: &PauliObservable) -> Result<i8> {
        if !self.closure.is_inferable(a.label()) {
            return Err(Error::NotInferable(a.to_string()));
        }
        assignment_value(&self.assignment, nu, a)
    }

    pub fn expectation(&self, q: &HvmDistribution, a: &PauliObservable, alpha: f64) -> Result<f64> {
        if !self.closure.is_inferable(a.label()) {
            return Err(Error::NotInferable(a.to_string()));
        }
        hvm_expectation(q, &self.assignment, a, alpha)
    }

    /// Checks that `a` is `±` a directly measurable observable.
    pub fn check_measurable(&self, a: &PauliObservable) -> Result<()> {
        if a.num_qubits() != self.num_qubits() {
            return Err(Error::Dimension {
                expected: self.num_qubits(),
                found: a.num_qubits(),
            });
        }
        if !a.is_hermitian() {
            return Err(Error::NonHermitian(a.to_string()));
        }
        if self.spec().measurable_sign(a.label()).is_none() {
            return Err(Error::NotMeasurable(a.to_string()));
        }
        Ok(())
    }
}

/// Exact distribution-level measurement update.
///
/// Returns the outcome probability `p` predicted by the model and the
/// updated table. Outcomes with `p < 1e-12` are rejected.
pub fn exact_measure_update(
    model: &HiddenVariableModel,
    q: &HvmDistribution,
    a: &PauliObservable,
    s: i8,
) -> Result<(f64, HvmDistribution)> {
    model.check_measurable(a)?;
    if s != 1 && s != -1 {
        return Err(Error::Usage(format!("outcome must be +1 or -1, got {s}")));
    }
    let e = model.expectation(q, a, 1.0)?;
    let p = (1.0 + s as f64 * e) / 2.0;
    if p < IMPOSSIBLE_OUTCOME {
        return Err(Error::ImpossibleOutcome {
            label: a.to_string(),
            outcome: s,
            p,
        });
    }
    let n = q.n;
    let ai = a.label().to_index();
    // λ_ν(a) = s  ⇔  [ν, a] = (b != s)
    let b = model.assignment.base_signed(a)?;
    let flip_needed = b != s;
    let norm = 1.0 / (2.0 * p);
    let next = (0..q.q.len())
        .map(|nu| {
            if symplectic_index(nu, ai, n) == flip_needed {
                (q.q[nu] + q.q[nu ^ ai]) * norm
            } else {
                0.0
            }
        })
        .collect();
    Ok((p, HvmDistribution { n, q: next }))
}
