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

//! Circuits of free gates and measurements, run through the hidden-variable
//! model either exactly (distribution level) or by trajectory sampling.
//!
//! Gates are never applied to the model. Each measured observable `P` that
//! follows gates `g_1 … g_k` is replaced by `g_1† … g_k† P g_k … g_1`, which
//! is again `±` a measurable observable because the gates are free.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::sampler::{shot_rng, HvmSampler, TrajectoryRecord};
use super::{exact_measure_update, HiddenVariableModel, HvmDistribution};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::pauli::{parse_observable, PauliObservable};
use crate::scheme::check_free_gate;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "op", content = "arg", rename_all = "lowercase")]
pub enum CircuitOp {
    Gate(Gate),
    Measure(PauliObservable),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Circuit {
    n: usize,
    ops: Vec<CircuitOp>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit { n, ops: Vec::new() }
    }

    pub fn gate(mut self, g: Gate) -> Self {
        self.ops.push(CircuitOp::Gate(g));
        self
    }

    pub fn measure(mut self, p: PauliObservable) -> Self {
        self.ops.push(CircuitOp::Measure(p));
        self
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn num_measurements(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, CircuitOp::Measure(_))).count()
    }

    /// Checks the circuit against the model's scheme and returns, per
    /// measurement, the lab-frame observable and its pulled-back form.
    pub fn pulled_back(&self, model: &HiddenVariableModel) -> Result<Vec<(PauliObservable, PauliObservable)>> {
        if self.n != model.num_qubits() {
            return Err(Error::Dimension {
                expected: model.num_qubits(),
                found: self.n,
            });
        }
        let mut applied: Vec<Gate> = Vec::new();
        let mut out = Vec::new();
        for op in &self.ops {
            match op {
                CircuitOp::Gate(g) => {
                    if !check_free_gate(model.spec(), g)? {
                        return Err(Error::NonFreeGate(g.to_string()));
                    }
                    applied.push(*g);
                }
                CircuitOp::Measure(p) => {
                    model.check_measurable(p)?;
                    let mut frame = p.clone();
                    for g in applied.iter().rev() {
                        frame = g.conjugate_inverse(&frame)?;
                    }
                    model.check_measurable(&frame)?;
                    out.push((p.clone(), frame));
                }
            }
        }
        Ok(out)
    }
}

/// Parses a line-oriented circuit: `gate H 0`, `gate CZ 0 1`, `measure +ZI`.
/// `#` starts a comment.
pub fn parse_circuit(text: &str, n: usize) -> Result<Circuit> {
    let mut circuit = Circuit::new(n);
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: lineno + 1,
            column: raw.len() - raw.trim_start().len() + 1,
            message,
        };
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match keyword {
            "gate" => {
                let g: Gate = rest.parse().map_err(|e: Error| err(e.to_string()))?;
                g.validate(n).map_err(|e| err(e.to_string()))?;
                circuit.ops.push(CircuitOp::Gate(g));
            }
            "measure" => {
                let p = parse_observable(rest.trim(), n).map_err(|e| err(e.to_string()))?;
                circuit.ops.push(CircuitOp::Measure(p));
            }
            other => return Err(err(format!("expected `gate` or `measure`, found {other:?}"))),
        }
    }
    Ok(circuit)
}

/// Initial model state for a simulation.
#[derive(Clone, Debug)]
pub enum HvmPrior {
    /// The uniform distribution (`I / 2^n`); works at any `n`.
    MaximallyMixed,
    Table(HvmDistribution),
}

impl HvmPrior {
    fn table(&self, n: usize) -> Result<HvmDistribution> {
        match self {
            HvmPrior::MaximallyMixed => HvmDistribution::uniform(n),
            HvmPrior::Table(q) => Ok(q.clone()),
        }
    }
}

/// Follows one outcome string through the exact update. Returns a record per
/// measurement (with the model's conditional probability) and the final table.
pub fn exact_outcome_chain(
    model: &HiddenVariableModel,
    prior: &HvmPrior,
    circuit: &Circuit,
    outcomes: &[i8],
) -> Result<(Vec<TrajectoryRecord>, HvmDistribution)> {
    let steps = circuit.pulled_back(model)?;
    if outcomes.len() != steps.len() {
        return Err(Error::Usage(format!(
            "circuit has {} measurements but {} outcomes were given",
            steps.len(),
            outcomes.len()
        )));
    }
    let mut q = prior.table(model.num_qubits())?;
    let mut records = Vec::with_capacity(steps.len());
    for (step, ((lab, frame), &s)) in steps.iter().zip(outcomes).enumerate() {
        let (p, next) = exact_measure_update(model, &q, frame, s).map_err(|e| match e {
            Error::ImpossibleOutcome { outcome, p, .. } => Error::ImpossibleOutcome {
                label: lab.to_string(),
                outcome,
                p,
            },
            other => other,
        })?;
        records.push(TrajectoryRecord {
            step,
            label: lab.to_string(),
            outcome: s,
            model_p: p,
        });
        q = next;
    }
    Ok((records, q))
}

/// Joint outcome distribution of all measurements, keyed by strings over
/// `+`/`-`. Branches with probability below `1e-12` are omitted.
pub fn exact_joint_distribution(
    model: &HiddenVariableModel,
    prior: &HvmPrior,
    circuit: &Circuit,
) -> Result<BTreeMap<String, f64>> {
    let steps: Vec<PauliObservable> = circuit
        .pulled_back(model)?
        .into_iter()
        .map(|(_, frame)| frame)
        .collect();
    let mut out = BTreeMap::new();
    let q = prior.table(model.num_qubits())?;
    let mut prefix = String::new();
    branch(model, &steps, &q, 1.0, &mut prefix, &mut out)?;
    Ok(out)
}

fn branch(
    model: &HiddenVariableModel,
    steps: &[PauliObservable],
    q: &HvmDistribution,
    weight: f64,
    prefix: &mut String,
    out: &mut BTreeMap<String, f64>,
) -> Result<()> {
    let Some((a, rest)) = steps.split_first() else {
        out.insert(prefix.clone(), weight);
        return Ok(());
    };
    for (s, c) in [(1i8, '+'), (-1, '-')] {
        match exact_measure_update(model, q, a, s) {
            Ok((p, next)) => {
                prefix.push(c);
                branch(model, rest, &next, weight * p, prefix, out)?;
                prefix.pop();
            }
            Err(Error::ImpossibleOutcome { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepSummary {
    pub step: usize,
    pub label: String,
    /// Empirical mean of the ±1 outcomes.
    pub mean: f64,
    /// Empirical frequency of outcome `+1`.
    pub plus_frequency: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSummary {
    pub shots: u64,
    pub seed: u64,
    pub steps: Vec<StepSummary>,
    /// Joint outcome strings over `+`/`-` with their counts.
    pub histogram: BTreeMap<String, u64>,
}

impl SampleSummary {
    /// Per-step marginal records; `model_p` is the empirical frequency.
    pub fn marginal_records(&self) -> Vec<TrajectoryRecord> {
        self.steps
            .iter()
            .flat_map(|s| {
                [(1i8, s.plus_frequency), (-1, 1.0 - s.plus_frequency)].map(|(outcome, f)| TrajectoryRecord {
                    step: s.step,
                    label: s.label.clone(),
                    outcome,
                    model_p: f,
                })
            })
            .collect()
    }

    pub fn frequency(&self, outcomes: &str) -> f64 {
        self.histogram.get(outcomes).copied().unwrap_or(0) as f64 / self.shots as f64
    }
}

/// Runs `shots` independent trajectories. Shot `k` uses the stream
/// `shot_rng(seed, k)`, so the summary does not depend on thread count.
pub fn simulate_circuit_hvm(
    model: &HiddenVariableModel,
    prior: &HvmPrior,
    circuit: &Circuit,
    shots: u64,
    seed: u64,
) -> Result<SampleSummary> {
    if shots == 0 {
        return Err(Error::Usage("shots must be at least 1".into()));
    }
    let steps = circuit.pulled_back(model)?;
    let frames: Vec<PauliObservable> = steps.iter().map(|(_, f)| f.clone()).collect();
    let table = match prior {
        HvmPrior::MaximallyMixed => None,
        HvmPrior::Table(q) => Some(q),
    };

    let run_shot = |shot: u64| -> Result<String> {
        let rng = shot_rng(seed, shot);
        let mut sampler = match table {
            None => HvmSampler::uniform(model.assignment().clone(), rng),
            Some(q) => HvmSampler::from_distribution(q, model.assignment().clone(), rng),
        };
        frames
            .iter()
            .map(|a| sampler.sample_step(a).map(|s| if s > 0 { '+' } else { '-' }))
            .collect()
    };

    let histogram: HashMap<String, u64> = (0..shots)
        .into_par_iter()
        .try_fold(HashMap::new, |mut acc: HashMap<String, u64>, shot| {
            *acc.entry(run_shot(shot)?).or_default() += 1;
            Ok::<_, Error>(acc)
        })
        .try_reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            Ok(a)
        })?;
    let histogram: BTreeMap<String, u64> = histogram.into_iter().collect();

    let steps = steps
        .iter()
        .enumerate()
        .map(|(i, (lab, _))| {
            let plus: u64 = histogram
                .iter()
                .filter(|(k, _)| k.as_bytes()[i] == b'+')
                .map(|(_, v)| v)
                .sum();
            let f = plus as f64 / shots as f64;
            StepSummary {
                step: i,
                label: lab.to_string(),
                mean: 2.0 * f - 1.0,
                plus_frequency: f,
            }
        })
        .collect();

    Ok(SampleSummary {
        shots,
        seed,
        steps,
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliObservable {
        s.parse().unwrap()
    }

    #[test]
    fn parse_circuit_file() {
        let c = parse_circuit("# demo\ngate H 0\nmeasure +ZI\n\nmeasure -IX # trailing\n", 2).unwrap();
        assert_eq!(c.num_measurements(), 2);
        assert_eq!(c.ops()[0], CircuitOp::Gate(Gate::H(0)));
        assert!(matches!(
            parse_circuit("measure XYZ", 2),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_circuit("gate H 0\nfoo", 2),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_circuit("gate H 4", 2).is_err());
    }

    #[test]
    fn empty_circuit() {
        let model = HiddenVariableModel::local(2);
        let (records, q) = exact_outcome_chain(&model, &HvmPrior::MaximallyMixed, &Circuit::new(2), &[]).unwrap();
        assert!(records.is_empty());
        assert_eq!(q, HvmDistribution::uniform(2).unwrap());
        let summary = simulate_circuit_hvm(&model, &HvmPrior::MaximallyMixed, &Circuit::new(2), 10, 1).unwrap();
        assert_eq!(summary.histogram.get(""), Some(&10));
    }

    #[test]
    fn hadamard_then_z_is_x() {
        let model = HiddenVariableModel::local(1);
        let c = Circuit::new(1).gate(Gate::H(0)).measure(p("Z"));
        let steps = c.pulled_back(&model).unwrap();
        assert_eq!(steps[0].1, p("X"));

        let direct = Circuit::new(1).measure(p("X")).measure(p("Z"));
        let via_h = Circuit::new(1)
            .gate(Gate::H(0))
            .measure(p("Z"))
            .gate(Gate::H(0))
            .measure(p("Z"));
        let q = HvmPrior::Table(HvmDistribution::point_mass(&p("Z").into_label()).unwrap());
        assert_eq!(
            exact_joint_distribution(&model, &q, &direct).unwrap(),
            exact_joint_distribution(&model, &q, &via_h).unwrap()
        );
    }

    #[test]
    fn rejects_non_free_and_unmeasurable() {
        let model = HiddenVariableModel::local(2);
        let c = Circuit::new(2).gate(Gate::CZ(0, 1)).measure(p("XI"));
        assert!(matches!(c.pulled_back(&model), Err(Error::NonFreeGate(_))));
        let c = Circuit::new(2).measure(p("XX"));
        assert!(matches!(c.pulled_back(&model), Err(Error::NotMeasurable(_))));
        let c = Circuit::new(2).gate(Gate::T(0));
        assert!(matches!(c.pulled_back(&model), Err(Error::NotClifford(_))));
    }

    #[test]
    fn x_then_z_joint_is_uniform() {
        let model = HiddenVariableModel::local(1);
        let c = Circuit::new(1).measure(p("X")).measure(p("Z"));
        let exact = exact_joint_distribution(&model, &HvmPrior::MaximallyMixed, &c).unwrap();
        assert_eq!(exact.len(), 4);
        for v in exact.values() {
            assert!((v - 0.25).abs() < 1e-15);
        }
        let shots = 100_000;
        let summary = simulate_circuit_hvm(&model, &HvmPrior::MaximallyMixed, &c, shots, 42).unwrap();
        let sigma = (0.25f64 * 0.75 / shots as f64).sqrt();
        for k in ["++", "+-", "-+", "--"] {
            assert!((summary.frequency(k) - 0.25).abs() < 4.0 * sigma, "{k}");
        }
    }

    #[test]
    fn sampling_is_deterministic_in_seed() {
        let model = HiddenVariableModel::local(2);
        let c = Circuit::new(2).measure(p("XI")).measure(p("IZ")).measure(p("ZI"));
        let a = simulate_circuit_hvm(&model, &HvmPrior::MaximallyMixed, &c, 5000, 9).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| simulate_circuit_hvm(&model, &HvmPrior::MaximallyMixed, &c, 5000, 9).unwrap());
        assert_eq!(a, b);
        let c2 = simulate_circuit_hvm(&model, &HvmPrior::MaximallyMixed, &c, 5000, 10).unwrap();
        assert_ne!(a.histogram, c2.histogram);
    }

    #[test]
    fn outcome_chain_records() {
        let model = HiddenVariableModel::local(1);
        let c = Circuit::new(1).measure(p("Z")).measure(p("Z")).measure(p("-Z"));
        let (records, _) = exact_outcome_chain(&model, &HvmPrior::MaximallyMixed, &c, &[1, 1, -1]).unwrap();
        let ps: Vec<f64> = records.iter().map(|r| r.model_p).collect();
        assert_eq!(ps, vec![0.5, 1.0, 1.0]);
        assert!(matches!(
            exact_outcome_chain(&model, &HvmPrior::MaximallyMixed, &c, &[1, -1, -1]),
            Err(Error::ImpossibleOutcome { .. })
        ));
        assert!(exact_outcome_chain(&model, &HvmPrior::MaximallyMixed, &c, &[1]).is_err());
    }
}
