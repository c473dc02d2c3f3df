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

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{assignment_value, HvmDistribution, ValueAssignment};
use crate::error::Result;
use crate::pauli::{BitString2n, PauliObservable};

/// Independent random stream for one shot: ChaCha8 keyed by `seed`, with the
/// shot index as stream id. Shots can run in any order or thread.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// One measurement of a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub step: usize,
    pub label: String,
    pub outcome: i8,
    pub model_p: f64,
}

/// A single random-walk trajectory over internal states.
#[derive(Clone, Debug)]
pub struct HvmSampler {
    nu: BitString2n,
    assignment: ValueAssignment,
    rng: ChaCha8Rng,
}

impl HvmSampler {
    pub fn at(nu: BitString2n, assignment: ValueAssignment, rng: ChaCha8Rng) -> Self {
        HvmSampler { nu, assignment, rng }
    }

    /// Draws `ν_0` uniformly, i.e. from the model of `I / 2^n`. No size limit.
    pub fn uniform(assignment: ValueAssignment, mut rng: ChaCha8Rng) -> Self {
        let n = assignment.num_qubits();
        let mut nu = BitString2n::zero(n);
        for q in 0..n {
            nu.set(q, rng.random(), rng.random());
        }
        Self::at(nu, assignment, rng)
    }

    /// Draws `ν_0` from a dense table by inverse CDF.
    pub fn from_distribution(q: &HvmDistribution, assignment: ValueAssignment, mut rng: ChaCha8Rng) -> Self {
        let u: f64 = rng.random();
        let probs = q.probabilities();
        let mut acc = 0.0;
        let mut index = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        for (i, &p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                index = i;
                break;
            }
        }
        let nu = BitString2n::from_index(q.num_qubits(), index);
        Self::at(nu, assignment, rng)
    }

    pub fn state(&self) -> &BitString2n {
        &self.nu
    }

    /// Emits `λ_ν(a)`, then replaces `ν` by `ν + a` with probability 1/2.
    pub fn sample_step(&mut self, a: &PauliObservable) -> Result<i8> {
        let outcome = assignment_value(&self.assignment, &self.nu, a)?;
        if self.rng.random::<bool>() {
            self.nu.add_assign(a.label());
        }
        Ok(outcome)
    }
}
