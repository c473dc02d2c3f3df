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

//! Cluster-state wires driven by single-qubit Pauli measurements.
//!
//! A pattern is compiled from a graph, a set of vertices cut out with `Z`
//! measurements and a route from the input to the output vertex. The route
//! must induce a path once the cuts are removed. Rule table (outcome bit `s`,
//! byproduct `X^x Z^z` on the qubit currently holding the logical state):
//!
//! | event                              | effect                                  |
//! |------------------------------------|-----------------------------------------|
//! | `Z` cut of `w`, outcome `t`        | pending `Z^t` on each route neighbour   |
//! | logical state lands on `v`         | `z ^= pending(v)`                       |
//! | measure route vertex at angle `θ`  | logical gate `H Rz(−θ)`; `(x, z) → (s ⊕ z, x)` |
//! | plain route vertex                 | `θ = 0`, basis `X`                      |
//! | red route vertex                   | `θ = −π/4`; basis `X` if `x = 0`, `Y` if `x = 1` |
//!
//! with `Rz(φ) = diag(1, e^{iφ})`. A red site carries `T = e^{−iπ/8 Z}`, so
//! `X` on it acts as `(X − Y)/√2` and `Y` as `(X + Y)/√2` on the unrotated
//! cluster. All byproducts are stored as parity sets over step indices.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64 as C;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::oracle::{gate_matrix, qubit_fidelity, DenseState, Matrix2, MAX_PURE_QUBITS, MIN_BRANCH_PROBABILITY};

/// Branches are enumerated exhaustively up to this many measurements.
pub const MAX_ENUMERATED_STEPS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterGraph {
    /// Grid coordinates `[row, column]`, for display only.
    pub vertices: Vec<[i32; 2]>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub red_sites: Vec<usize>,
    pub input: usize,
    pub output: usize,
}

impl ClusterGraph {
    /// A line `0 - 1 - ... - n-1` with input 0 and output `n-1`.
    pub fn line(n: usize, red_sites: &[usize]) -> Result<Self> {
        let g = ClusterGraph {
            vertices: (0..n as i32).map(|c| [0, c]).collect(),
            edges: (1..n).map(|v| [v - 1, v]).collect(),
            red_sites: red_sites.to_vec(),
            input: 0,
            output: n.saturating_sub(1),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vertices();
        let bad = |m: String| Err(Error::Pattern(m));
        if n < 2 {
            return bad("a wire needs at least two vertices".into());
        }
        for &[a, b] in &self.edges {
            if a >= n || b >= n || a == b {
                return bad(format!("edge {a}-{b} is invalid"));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let key = |e: &[usize; 2]| (e[0].min(e[1]), e[0].max(e[1]));
            if self.edges[..i].iter().any(|f| key(f) == key(e)) {
                return bad(format!("edge {}-{} listed twice", e[0], e[1]));
            }
        }
        if let Some(r) = self.red_sites.iter().find(|&&r| r >= n) {
            return bad(format!("red site {r} is not a vertex"));
        }
        if self.input >= n || self.output >= n || self.input == self.output {
            return bad("input and output must be distinct vertices".into());
        }
        Ok(())
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&[a, b]| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors(a).any(|w| w == b)
    }

    pub fn is_red(&self, v: usize) -> bool {
        self.red_sites.contains(&v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

/// Parity set over earlier step outcomes, as a bit mask of step indices.
pub type Parity = u64;

fn parity(mask: Parity, outcomes: Parity) -> bool {
    (mask & outcomes).count_ones() % 2 == 1
}

fn mask_steps(mask: Parity) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternStep {
    pub vertex: usize,
    pub basis: Basis,
    /// `X` and `Y` are swapped when the outcome parity of these steps is odd.
    pub swap_xy_if: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Byproduct {
    /// `X` on the output iff the outcome parity of these steps is odd.
    pub x: Vec<usize>,
    /// `Z` on the output iff the outcome parity of these steps is odd.
    pub z: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasurementPattern {
    pub steps: Vec<PatternStep>,
    pub output: usize,
    pub byproduct: Byproduct,
    /// Desired angle of each route measurement, in order.
    pub route_angles: Vec<f64>,
}

impl MeasurementPattern {
    /// Checks that every non-output vertex is measured exactly once, only
    /// single-qubit Pauli bases are used and adaptivity looks backwards.
    pub fn validate(&self, graph: &ClusterGraph) -> Result<()> {
        graph.validate()?;
        let n = graph.num_vertices();
        if self.output != graph.output {
            return Err(Error::Pattern("pattern output differs from graph output".into()));
        }
        if self.steps.len() > 63 {
            return Err(Error::Pattern("too many steps".into()));
        }
        let mut seen = vec![false; n];
        for (j, st) in self.steps.iter().enumerate() {
            if st.vertex >= n || st.vertex == self.output || seen[st.vertex] {
                return Err(Error::Pattern(format!(
                    "step {j} measures vertex {} illegally",
                    st.vertex
                )));
            }
            seen[st.vertex] = true;
            if st.swap_xy_if.iter().any(|&k| k >= j) {
                return Err(Error::Pattern(format!("step {j} depends on a later outcome")));
            }
            if st.basis == Basis::Z && !st.swap_xy_if.is_empty() {
                return Err(Error::Pattern(format!("step {j} adapts a Z measurement")));
            }
        }
        if let Some(v) = (0..n).find(|&v| v != self.output && !seen[v]) {
            return Err(Error::Pattern(format!("vertex {v} is never measured")));
        }
        let k = self.steps.len();
        if self.byproduct.x.iter().chain(&self.byproduct.z).any(|&j| j >= k) {
            return Err(Error::Pattern("byproduct references a missing step".into()));
        }
        Ok(())
    }

    pub fn num_steps(&self) -> usize {
        self.steps.len()
    }

    /// Logical gate implemented up to the byproduct: `Π H Rz(−θ_i)`.
    pub fn logical_unitary(&self) -> Matrix2 {
        let h = gate_matrix(&Gate::H(0)).expect("single-qubit gate");
        let mut u = identity2();
        for &theta in &self.route_angles {
            let rz = [[one(), zero()], [zero(), C::from_polar(1.0, -theta)]];
            u = mul2(&h, &mul2(&rz, &u));
        }
        u
    }

    fn basis_at(&self, j: usize, outcomes: Parity) -> Basis {
        let st = &self.steps[j];
        let swap = st.swap_xy_if.iter().fold(false, |a, &k| a ^ (outcomes >> k & 1 == 1));
        match (st.basis, swap) {
            (Basis::X, true) => Basis::Y,
            (Basis::Y, true) => Basis::X,
            (b, _) => b,
        }
    }

    fn byproduct_bits(&self, outcomes: Parity) -> (bool, bool) {
        let m = |v: &[usize]| v.iter().fold(0u64, |a, &j| a | 1 << j);
        (
            parity(m(&self.byproduct.x), outcomes),
            parity(m(&self.byproduct.z), outcomes),
        )
    }
}

fn zero() -> C {
    C::new(0.0, 0.0)
}

fn one() -> C {
    C::new(1.0, 0.0)
}

fn identity2() -> Matrix2 {
    [[one(), zero()], [zero(), one()]]
}

pub fn mul2(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    std::array::from_fn(|r| std::array::from_fn(|c| a[r][0] * b[0][c] + a[r][1] * b[1][c]))
}

fn apply2(m: &Matrix2, v: [C; 2]) -> [C; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// Product of named single-qubit gates applied left to right (`["H", "T"]`
/// is `T·H`).
pub fn gate_sequence_matrix(names: &[String]) -> Result<Matrix2> {
    names.iter().try_fold(identity2(), |acc, name| {
        let g: Gate = format!("{name} 0").parse()?;
        let m = gate_matrix(&g).ok_or_else(|| Error::Usage(format!("{name} is not a single-qubit gate")))?;
        Ok(mul2(&m, &acc))
    })
}

/// Compiles a wire pattern: `cuts` are measured in `Z` first, then the route
/// vertices (all but the last) in `X`, adaptively `X`/`Y` on red sites.
pub fn compile_pattern(graph: &ClusterGraph, cuts: &[usize], route: &[usize]) -> Result<MeasurementPattern> {
    graph.validate()?;
    let n = graph.num_vertices();
    let bad = |m: String| Err(Error::Pattern(m));
    if route.len() < 2 || route[0] != graph.input || *route.last().unwrap() != graph.output {
        return bad("route must run from the input to the output vertex".into());
    }
    let mut role = vec![0u8; n];
    for &v in cuts.iter().chain(route) {
        if v >= n || role[v] != 0 {
            return bad(format!("vertex {v} listed twice or out of range"));
        }
        role[v] = 1;
    }
    for (i, &a) in route.iter().enumerate() {
        for (j, &b) in route.iter().enumerate().skip(i + 1) {
            if graph.adjacent(a, b) != (j == i + 1) {
                return bad(format!("route does not induce a path at {a}-{b}"));
            }
        }
    }
    if graph.is_red(graph.output) {
        return bad("output vertex cannot be a red site".into());
    }
    if cuts.len() + route.len() - 1 > 63 {
        return bad("too many steps".into());
    }

    let mut steps = Vec::new();
    let mut pending = vec![0 as Parity; n];
    for (j, &w) in cuts.iter().enumerate() {
        steps.push(PatternStep {
            vertex: w,
            basis: Basis::Z,
            swap_xy_if: vec![],
        });
        for v in graph.neighbors(w) {
            pending[v] ^= 1 << j;
        }
    }

    let (mut x, mut z): (Parity, Parity) = (0, pending[graph.input]);
    let mut route_angles = Vec::new();
    for (i, &v) in route[..route.len() - 1].iter().enumerate() {
        let j = steps.len();
        let red = graph.is_red(v);
        steps.push(PatternStep {
            vertex: v,
            basis: Basis::X,
            swap_xy_if: if red { mask_steps(x) } else { vec![] },
        });
        route_angles.push(if red { -FRAC_PI_4 } else { 0.0 });
        let next = route[i + 1];
        (x, z) = ((1 << j) ^ z, x ^ pending[next]);
    }
    Ok(MeasurementPattern {
        steps,
        output: graph.output,
        byproduct: Byproduct {
            x: mask_steps(x),
            z: mask_steps(z),
        },
        route_angles,
    })
}

/// Input qubit in `input` (one-qubit pure state), all others `|+⟩`, `CZ` on
/// every edge, `T` on every red site.
pub fn build_modified_cluster(graph: &ClusterGraph, input: &DenseState) -> Result<DenseState> {
    build_cluster(graph, input, true)
}

fn build_cluster(graph: &ClusterGraph, input: &DenseState, rotate_red: bool) -> Result<DenseState> {
    graph.validate()?;
    let n = graph.num_vertices();
    if n > MAX_PURE_QUBITS {
        return Err(Error::SizeBound {
            what: "cluster states",
            n,
            max: MAX_PURE_QUBITS,
        });
    }
    let psi = match input.amplitudes() {
        Some(a) if a.len() == 2 => [a[0], a[1]],
        _ => return Err(Error::InvalidState("input must be a one-qubit pure state".into())),
    };
    let scale = FRAC_1_SQRT_2.powi(n as i32 - 1);
    let amps = (0..1usize << n).map(|k| psi[k >> graph.input & 1] * scale).collect();
    let mut state = DenseState::pure(n, amps)?;
    for &[a, b] in &graph.edges {
        state.apply_gate(&Gate::CZ(a, b))?;
    }
    if rotate_red {
        for &r in &graph.red_sites {
            state.apply_gate(&Gate::T(r))?;
        }
    }
    Ok(state)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternRun {
    /// Outcome bits, `1` for eigenvalue −1.
    pub outcomes: Vec<u8>,
    pub probability: f64,
    pub byproduct_x: bool,
    pub byproduct_z: bool,
    #[serde(skip)]
    pub output: Matrix2,
}

impl PatternRun {
    /// Output qubit as a one-qubit density matrix.
    pub fn output_state(&self) -> Result<DenseState> {
        DenseState::mixed(1, self.output.iter().flatten().copied().collect())
    }
}

fn finish(st: &DenseState, pattern: &MeasurementPattern, outcomes: Parity, probability: f64) -> Result<PatternRun> {
    let (bx, bz) = pattern.byproduct_bits(outcomes);
    Ok(PatternRun {
        outcomes: (0..pattern.num_steps()).map(|j| (outcomes >> j & 1) as u8).collect(),
        probability,
        byproduct_x: bx,
        byproduct_z: bz,
        output: st.reduced_qubit(pattern.output)?,
    })
}

/// Eigenvector of a single-qubit Pauli for outcome `s`.
fn basis_ket(b: Basis, s: i8) -> [C; 2] {
    let h = FRAC_1_SQRT_2 * s as f64;
    match (b, s > 0) {
        (Basis::Z, true) => [one(), zero()],
        (Basis::Z, false) => [zero(), one()],
        (Basis::X, _) => [C::new(FRAC_1_SQRT_2, 0.0), C::new(h, 0.0)],
        (Basis::Y, _) => [C::new(FRAC_1_SQRT_2, 0.0), C::new(0.0, h)],
    }
}

fn outcome_sign(outcomes: Parity, j: usize) -> i8 {
    if outcomes >> j & 1 == 1 {
        -1
    } else {
        1
    }
}

/// Projection that maps a vanishing branch to `None`.
fn try_project(st: &DenseState, q: usize, ket: [C; 2]) -> Result<Option<(f64, DenseState)>> {
    match st.project_qubit(q, ket) {
        Ok(r) => Ok(Some(r)),
        Err(Error::ImpossibleOutcome { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Depth-first walk over outcome branches, sharing prefixes.
fn explore(
    st: &DenseState,
    pattern: &MeasurementPattern,
    j: usize,
    outcomes: Parity,
    prob: f64,
) -> Result<Vec<PatternRun>> {
    if j == pattern.num_steps() {
        return Ok(vec![finish(st, pattern, outcomes, prob)?]);
    }
    let basis = pattern.basis_at(j, outcomes);
    let v = pattern.steps[j].vertex;
    let branch = |bit: Parity| -> Result<Vec<PatternRun>> {
        let o = outcomes | bit << j;
        match try_project(st, v, basis_ket(basis, outcome_sign(o, j)))? {
            Some((p, next)) => explore(&next, pattern, j + 1, o, prob * p),
            None => Ok(Vec::new()),
        }
    };
    let (a, b) = rayon::join(|| branch(0), || branch(1));
    let mut out = a?;
    out.extend(b?);
    Ok(out)
}

/// Samples one run with Born-rule outcomes.
pub fn run_pattern<R: Rng + ?Sized>(
    state: &DenseState,
    pattern: &MeasurementPattern,
    rng: &mut R,
) -> Result<PatternRun> {
    let mut st = state.clone();
    let mut outcomes: Parity = 0;
    let mut prob = 1.0;
    for j in 0..pattern.num_steps() {
        let basis = pattern.basis_at(j, outcomes);
        let v = pattern.steps[j].vertex;
        let plus = try_project(&st, v, basis_ket(basis, 1))?;
        let take_plus = match &plus {
            Some((p, _)) => 1.0 - p < MIN_BRANCH_PROBABILITY || rng.random::<f64>() < *p,
            None => false,
        };
        let (p, next) = if take_plus {
            plus.expect("checked above")
        } else {
            outcomes |= 1 << j;
            st.project_qubit(v, basis_ket(basis, -1))?
        };
        prob *= p;
        st = next;
    }
    finish(&st, pattern, outcomes, prob)
}

/// Every branch with nonzero probability.
pub fn enumerate_branches(state: &DenseState, pattern: &MeasurementPattern) -> Result<Vec<PatternRun>> {
    let k = pattern.num_steps();
    if k > MAX_ENUMERATED_STEPS {
        return Err(Error::SizeBound {
            what: "branch enumeration (steps)",
            n: k,
            max: MAX_ENUMERATED_STEPS,
        });
    }
    explore(state, pattern, 0, 0, 1.0)
}

/// Haar-random one-qubit pure state.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> [C; 2] {
    loop {
        let g: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let v = [C::new(g[0], g[1]), C::new(g[2], g[3])];
        let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if norm > 1e-6 {
            return [v[0] / norm, v[1] / norm];
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub trials: usize,
    pub branches: usize,
    pub enumerated: bool,
    pub min_fidelity: f64,
}

/// Over `trials` random inputs, compares every branch's output with
/// `byproduct · reference · input`. Branches are enumerated when the pattern
/// has at most ten steps, otherwise one branch is sampled per trial.
pub fn verify_logical_gate<R: Rng + ?Sized>(
    graph: &ClusterGraph,
    pattern: &MeasurementPattern,
    reference: &Matrix2,
    trials: usize,
    rng: &mut R,
) -> Result<VerifyReport> {
    pattern.validate(graph)?;
    let enumerated = pattern.num_steps() <= MAX_ENUMERATED_STEPS;
    let x = gate_matrix(&Gate::X(0)).expect("single-qubit gate");
    let z = gate_matrix(&Gate::Z(0)).expect("single-qubit gate");
    let mut min_fidelity = f64::INFINITY;
    let mut branches = 0;
    for _ in 0..trials {
        let psi = random_qubit(rng);
        let state = build_modified_cluster(graph, &DenseState::pure(1, psi.to_vec())?)?;
        let runs = if enumerated {
            enumerate_branches(&state, pattern)?
        } else {
            vec![run_pattern(&state, pattern, rng)?]
        };
        let ideal = apply2(reference, psi);
        for run in &runs {
            let mut target = ideal;
            if run.byproduct_z {
                target = apply2(&z, target);
            }
            if run.byproduct_x {
                target = apply2(&x, target);
            }
            min_fidelity = min_fidelity.min(qubit_fidelity(&run.output, target));
        }
        branches += runs.len();
    }
    Ok(VerifyReport {
        trials,
        branches,
        enumerated,
        min_fidelity: if branches == 0 { 0.0 } else { min_fidelity },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RedSiteReport {
    pub branches: usize,
    pub red_measurements: usize,
    /// Largest outcome-probability difference over all branches.
    pub max_probability_deviation: f64,
    /// Largest output-state deviation `1 − F` over all branches.
    pub max_output_deviation: f64,
}

/// Runs each branch twice: on the T-rotated cluster with `X`/`Y` on red
/// sites, and on the unrotated cluster with the equatorial projector
/// `(X ∓ Y)/√2`. Outcome probabilities and outputs must agree per branch.
pub fn red_site_equivalence(
    graph: &ClusterGraph,
    pattern: &MeasurementPattern,
    input: &DenseState,
) -> Result<RedSiteReport> {
    pattern.validate(graph)?;
    let k = pattern.num_steps();
    if k > MAX_ENUMERATED_STEPS {
        return Err(Error::SizeBound {
            what: "branch enumeration (steps)",
            n: k,
            max: MAX_ENUMERATED_STEPS,
        });
    }
    let rotated = build_cluster(graph, input, true)?;
    let plain = build_cluster(graph, input, false)?;
    let mut report = RedSiteReport {
        branches: 0,
        red_measurements: 0,
        max_probability_deviation: 0.0,
        max_output_deviation: 0.0,
    };
    compare_red(graph, pattern, &rotated, &plain, 0, 0, 0, 0.0, &mut report)?;
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn compare_red(
    graph: &ClusterGraph,
    pattern: &MeasurementPattern,
    rotated: &DenseState,
    plain: &DenseState,
    j: usize,
    outcomes: Parity,
    reds: usize,
    dev: f64,
    report: &mut RedSiteReport,
) -> Result<()> {
    if j == pattern.num_steps() {
        let to_state = |m: Matrix2| DenseState::mixed(1, m.iter().flatten().copied().collect());
        let a = to_state(rotated.reduced_qubit(pattern.output)?)?;
        let b = to_state(plain.reduced_qubit(pattern.output)?)?;
        let f = crate::oracle::fidelity(&a, &b)?;
        report.branches += 1;
        report.red_measurements += reds;
        report.max_probability_deviation = report.max_probability_deviation.max(dev);
        report.max_output_deviation = report.max_output_deviation.max(1.0 - f);
        return Ok(());
    }
    let v = pattern.steps[j].vertex;
    let basis = pattern.basis_at(j, outcomes);
    let red = graph.is_red(v) && basis != Basis::Z;
    for bit in [0, 1] {
        let o = outcomes | bit << j;
        let s = outcome_sign(o, j);
        let Some((pa, na)) = try_project(rotated, v, basis_ket(basis, s))? else {
            continue;
        };
        let ket = if red {
            // X on a T-rotated site acts as (X − Y)/√2, Y as (X + Y)/√2
            let theta = if basis == Basis::X { -FRAC_PI_4 } else { FRAC_PI_4 };
            [
                C::new(FRAC_1_SQRT_2, 0.0),
                C::from_polar(s as f64 * FRAC_1_SQRT_2, theta),
            ]
        } else {
            basis_ket(basis, s)
        };
        let (pb, nb) = plain.project_qubit(v, ket)?;
        compare_red(
            graph,
            pattern,
            &na,
            &nb,
            j + 1,
            o,
            reds + red as usize,
            dev.max((pa - pb).abs()),
            report,
        )?;
    }
    Ok(())
}

/// A shipped cell: graph, routing and the gate it should implement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellFixture {
    pub name: String,
    pub description: String,
    pub graph: ClusterGraph,
    pub cuts: Vec<usize>,
    pub route: Vec<usize>,
    /// Expected logical gate as single-qubit gate names applied in order.
    pub expected: Vec<String>,
}

impl CellFixture {
    pub fn from_json(text: &str) -> Result<Self> {
        let cell: CellFixture = serde_json::from_str(text)?;
        cell.graph.validate()?;
        Ok(cell)
    }

    /// Shipped fixtures: `a`, `b` and `two-red`.
    pub fn builtin(name: &str) -> Result<Self> {
        let text = match name {
            "a" => include_str!("../fixtures/mbqc/cell_a.json"),
            "b" => include_str!("../fixtures/mbqc/cell_b.json"),
            "two-red" => include_str!("../fixtures/mbqc/two_red_wire.json"),
            other => {
                return Err(Error::Usage(format!(
                    "unknown cell {other:?}; expected a, b or two-red"
                )))
            }
        };
        Self::from_json(text)
    }

    pub fn pattern(&self) -> Result<MeasurementPattern> {
        compile_pattern(&self.graph, &self.cuts, &self.route)
    }

    pub fn reference(&self) -> Result<Matrix2> {
        gate_sequence_matrix(&self.expected)
    }
}

/// Largest `|a − e^{iφ} b|` entry after fixing the global phase.
pub fn phase_distance(a: &Matrix2, b: &Matrix2) -> f64 {
    let (mut best, mut idx) = (0.0, (0, 0));
    for (r, row) in b.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if v.norm() > best {
                best = v.norm();
                idx = (r, c);
            }
        }
    }
    let ratio = a[idx.0][idx.1] / b[idx.0][idx.1];
    let phase = if ratio.norm() > 0.0 {
        ratio / ratio.norm()
    } else {
        one()
    };
    let mut d = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            d = d.max((a[r][c] - phase * b[r][c]).norm());
        }
    }
    d
}
