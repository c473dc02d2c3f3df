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

//! Dense reference simulator.
//!
//! Basis index convention: qubit `q` is bit `q` of the index (qubit 0 is the
//! fastest-varying). Amplitude dumps use the same little-endian order. A
//! density matrix is stored row-major, `rho[row * 2^n + col]`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::pauli::PauliObservable;

pub const MAX_PURE_QUBITS: usize = 14;
pub const MAX_MIXED_QUBITS: usize = 7;
/// Tolerance for normalization and Hermiticity checks.
pub const TOLERANCE: f64 = 1e-10;
/// Branches below this probability are treated as impossible.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-12;
/// Cap on the number of generators for symbolic rank computation.
pub const MAX_STABILIZER_GENERATORS: usize = 20;

pub type Matrix2 = [[C; 2]; 2];

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);
const I: C = C::new(0.0, 1.0);

/// How to prepare a [`DenseState`].
#[derive(Clone, Debug)]
pub enum StatePrep {
    Zeros,
    MaximallyMixed,
    /// The unique joint +1 eigenstate of a commuting list of signed Paulis.
    Stabilizers(Vec<PauliObservable>),
    /// Little-endian amplitudes; must have unit norm.
    Custom(Vec<C>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum DenseState {
    Pure { n: usize, amps: Vec<C> },
    Mixed { n: usize, rho: Vec<C> },
}

fn check_size(what: &'static str, n: usize, max: usize) -> Result<()> {
    if n > max {
        Err(Error::SizeBound { what, n, max })
    } else {
        Ok(())
    }
}

/// Bit masks (z, x) of a label, qubit `q` at bit `q`.
fn masks(p: &PauliObservable) -> (usize, usize) {
    let l = p.label();
    (0..l.num_qubits()).fold((0, 0), |(z, x), q| {
        (z | (l.z(q) as usize) << q, x | (l.x(q) as usize) << q)
    })
}

fn i_pow(k: u32) -> C {
    match k % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// `T|k⟩ = coeff(k) |k ⊕ x⟩`.
struct PauliAction {
    z: usize,
    x: usize,
    base: C,
}

impl PauliAction {
    fn new(p: &PauliObservable) -> Self {
        let (z, x) = masks(p);
        let y = (z & x).count_ones();
        PauliAction {
            z,
            x,
            base: i_pow(p.phase() as u32 + 4 * y - y),
        }
    }

    fn coeff(&self, k: usize) -> C {
        if (self.z & (k ^ self.x)).count_ones() % 2 == 1 {
            -self.base
        } else {
            self.base
        }
    }

    fn apply(&self, v: &[C]) -> Vec<C> {
        let mut out = vec![ZERO; v.len()];
        for (k, &a) in v.iter().enumerate() {
            out[k ^ self.x] = self.coeff(k) * a;
        }
        out
    }
}

/// Applies a 2×2 matrix to bit `bit` of a vector of length `2^bits`.
fn apply_matrix_bit(v: &mut [C], bit: usize, m: &Matrix2) {
    let stride = 1usize << bit;
    for k in 0..v.len() {
        if k & stride == 0 {
            let (a, b) = (v[k], v[k | stride]);
            v[k] = m[0][0] * a + m[0][1] * b;
            v[k | stride] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn conj2(m: &Matrix2) -> Matrix2 {
    [[m[0][0].conj(), m[0][1].conj()], [m[1][0].conj(), m[1][1].conj()]]
}

pub fn gate_matrix(g: &Gate) -> Option<Matrix2> {
    let h = C::new(FRAC_1_SQRT_2, 0.0);
    Some(match g {
        Gate::I(_) => [[ONE, ZERO], [ZERO, ONE]],
        Gate::H(_) => [[h, h], [h, -h]],
        Gate::S(_) => [[ONE, ZERO], [ZERO, I]],
        Gate::X(_) => [[ZERO, ONE], [ONE, ZERO]],
        Gate::Y(_) => [[ZERO, -I], [I, ZERO]],
        Gate::Z(_) => [[ONE, ZERO], [ZERO, -ONE]],
        Gate::T(_) => [
            [C::from_polar(1.0, -PI / 8.0), ZERO],
            [ZERO, C::from_polar(1.0, PI / 8.0)],
        ],
        Gate::CZ(..) => return None,
    })
}

impl DenseState {
    pub fn prepare(kind: &StatePrep, n: usize) -> Result<Self> {
        match kind {
            StatePrep::Zeros => {
                check_size("pure states", n, MAX_PURE_QUBITS)?;
                let mut amps = vec![ZERO; 1 << n];
                amps[0] = ONE;
                Ok(DenseState::Pure { n, amps })
            }
            StatePrep::MaximallyMixed => {
                check_size("density matrices", n, MAX_MIXED_QUBITS)?;
                let dim = 1usize << n;
                let mut rho = vec![ZERO; dim * dim];
                for k in 0..dim {
                    rho[k * dim + k] = C::new(1.0 / dim as f64, 0.0);
                }
                Ok(DenseState::Mixed { n, rho })
            }
            StatePrep::Stabilizers(list) => stabilizer_state(list, n),
            StatePrep::Custom(amps) => Self::pure(n, amps.clone()),
        }
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::prepare(&StatePrep::Zeros, n)
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        Self::prepare(&StatePrep::MaximallyMixed, n)
    }

    /// Validated pure state.
    pub fn pure(n: usize, amps: Vec<C>) -> Result<Self> {
        check_size("pure states", n, MAX_PURE_QUBITS)?;
        if amps.len() != 1 << n {
            return Err(Error::InvalidState(format!(
                "expected {} amplitudes, got {}",
                1usize << n,
                amps.len()
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidState(format!("squared norm {norm} is not 1")));
        }
        Ok(DenseState::Pure { n, amps })
    }

    /// Validated density matrix (row-major).
    pub fn mixed(n: usize, rho: Vec<C>) -> Result<Self> {
        check_size("density matrices", n, MAX_MIXED_QUBITS)?;
        let dim = 1usize << n;
        if rho.len() != dim * dim {
            return Err(Error::InvalidState(format!(
                "expected {} entries, got {}",
                dim * dim,
                rho.len()
            )));
        }
        let m = DMatrix::from_row_slice(dim, dim, &rho);
        if (&m - m.adjoint()).iter().any(|e| e.norm() > TOLERANCE) {
            return Err(Error::InvalidState("density matrix is not Hermitian".into()));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > TOLERANCE || trace.im.abs() > TOLERANCE {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        if m.symmetric_eigenvalues().iter().any(|&l| l < -TOLERANCE) {
            return Err(Error::InvalidState(
                "density matrix is not positive semidefinite".into(),
            ));
        }
        Ok(DenseState::Mixed { n, rho })
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            DenseState::Pure { n, .. } | DenseState::Mixed { n, .. } => *n,
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, DenseState::Pure { .. })
    }

    /// Little-endian amplitudes of a pure state.
    pub fn amplitudes(&self) -> Option<&[C]> {
        match self {
            DenseState::Pure { amps, .. } => Some(amps),
            DenseState::Mixed { .. } => None,
        }
    }

    /// Density matrix, row-major.
    pub fn density_matrix(&self) -> Result<Vec<C>> {
        match self {
            DenseState::Mixed { rho, .. } => Ok(rho.clone()),
            DenseState::Pure { n, amps } => {
                check_size("density matrices", *n, MAX_MIXED_QUBITS)?;
                let dim = amps.len();
                let mut rho = vec![ZERO; dim * dim];
                for r in 0..dim {
                    for c in 0..dim {
                        rho[r * dim + c] = amps[r] * amps[c].conj();
                    }
                }
                Ok(rho)
            }
        }
    }

    pub fn to_mixed(&self) -> Result<Self> {
        Ok(DenseState::Mixed {
            n: self.num_qubits(),
            rho: self.density_matrix()?,
        })
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        let n = self.num_qubits();
        if q >= n {
            Err(Error::QubitIndex { index: q, n })
        } else {
            Ok(())
        }
    }

    /// Applies `m` to qubit `q` as `m ρ m†` (or `m|ψ⟩`). `m` need not be unitary.
    pub fn apply_single(&mut self, q: usize, m: &Matrix2) -> Result<()> {
        self.check_qubit(q)?;
        match self {
            DenseState::Pure { amps, .. } => apply_matrix_bit(amps, q, m),
            DenseState::Mixed { n, rho } => {
                apply_matrix_bit(rho, *n + q, m);
                apply_matrix_bit(rho, q, &conj2(m));
            }
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        g.validate(self.num_qubits())?;
        if let Some(m) = gate_matrix(g) {
            return self.apply_single(g.targets()[0], &m);
        }
        let Gate::CZ(a, b) = *g else { unreachable!() };
        let mask = 1usize << a | 1 << b;
        match self {
            DenseState::Pure { amps, .. } => {
                for (k, v) in amps.iter_mut().enumerate() {
                    if k & mask == mask {
                        *v = -*v;
                    }
                }
            }
            DenseState::Mixed { n, rho } => {
                let dim = 1usize << *n;
                for (i, v) in rho.iter_mut().enumerate() {
                    let (r, c) = (i / dim, i % dim);
                    if (r & mask == mask) != (c & mask == mask) {
                        *v = -*v;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_gates(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(g))
    }

    fn check_observable(&self, p: &PauliObservable) -> Result<()> {
        if p.num_qubits() != self.num_qubits() {
            return Err(Error::Dimension {
                expected: self.num_qubits(),
                found: p.num_qubits(),
            });
        }
        if !p.is_hermitian() {
            return Err(Error::NonHermitian(p.to_string()));
        }
        Ok(())
    }

    /// `tr(P ρ)` or `⟨ψ|P|ψ⟩`.
    pub fn pauli_expectation(&self, p: &PauliObservable) -> Result<f64> {
        self.check_observable(p)?;
        let t = PauliAction::new(p);
        let value: C = match self {
            DenseState::Pure { amps, .. } => amps
                .iter()
                .enumerate()
                .map(|(k, &a)| amps[k ^ t.x].conj() * t.coeff(k) * a)
                .sum(),
            DenseState::Mixed { n, rho } => {
                let dim = 1usize << *n;
                (0..dim).map(|k| t.coeff(k) * rho[k * dim + (k ^ t.x)]).sum()
            }
        };
        debug_assert!(value.im.abs() < TOLERANCE, "imaginary expectation {value}");
        Ok(value.re)
    }

    /// Projects onto the `s` eigenspace of `p`; returns the Born probability
    /// and the normalized post-measurement state.
    pub fn project(&self, p: &PauliObservable, s: i8) -> Result<(f64, DenseState)> {
        self.check_observable(p)?;
        let t = PauliAction::new(p);
        let sign = if s > 0 { 1.0 } else { -1.0 };
        let (prob, mut out) = match self {
            DenseState::Pure { n, amps } => {
                let pv = t.apply(amps);
                let v: Vec<C> = amps.iter().zip(&pv).map(|(a, b)| (a + b * sign) * 0.5).collect();
                let prob = v.iter().map(|a| a.norm_sqr()).sum::<f64>();
                (prob, DenseState::Pure { n: *n, amps: v })
            }
            DenseState::Mixed { n, rho } => {
                let dim = 1usize << *n;
                let left = |m: &[C]| -> Vec<C> {
                    let mut o = vec![ZERO; m.len()];
                    for r in 0..dim {
                        let k = r ^ t.x;
                        let c0 = t.coeff(k);
                        for c in 0..dim {
                            o[r * dim + c] = c0 * m[k * dim + c];
                        }
                    }
                    o
                };
                let right = |m: &[C]| -> Vec<C> {
                    let mut o = vec![ZERO; m.len()];
                    for r in 0..dim {
                        for c in 0..dim {
                            o[r * dim + c] = m[r * dim + (c ^ t.x)] * t.coeff(c);
                        }
                    }
                    o
                };
                let pr = left(rho);
                let rp = right(rho);
                let prp = right(&pr);
                let v: Vec<C> = (0..rho.len())
                    .map(|i| (rho[i] + (pr[i] + rp[i]) * sign + prp[i]) * 0.25)
                    .collect();
                let prob = (0..dim).map(|k| v[k * dim + k].re).sum::<f64>();
                (prob, DenseState::Mixed { n: *n, rho: v })
            }
        };
        if prob < MIN_BRANCH_PROBABILITY {
            return Err(Error::ImpossibleOutcome {
                label: p.to_string(),
                outcome: if s > 0 { 1 } else { -1 },
                p: prob,
            });
        }
        out.scale(1.0 / prob);
        Ok((prob, out))
    }

    fn scale(&mut self, factor: f64) {
        match self {
            DenseState::Pure { amps, .. } => amps.iter_mut().for_each(|a| *a *= factor.sqrt()),
            DenseState::Mixed { rho, .. } => rho.iter_mut().for_each(|a| *a *= factor),
        }
    }

    /// Born-rule draw of a Pauli measurement. Returns (outcome, collapsed
    /// state, probability of the drawn outcome).
    pub fn measure_pauli<R: Rng + ?Sized>(&self, p: &PauliObservable, rng: &mut R) -> Result<(i8, DenseState, f64)> {
        let plus = ((1.0 + self.pauli_expectation(p)?) / 2.0).clamp(0.0, 1.0);
        let s = if plus < MIN_BRANCH_PROBABILITY {
            -1
        } else if 1.0 - plus < MIN_BRANCH_PROBABILITY || rng.random::<f64>() < plus {
            1
        } else {
            -1
        };
        let (prob, state) = self.project(p, s)?;
        Ok((s, state, prob))
    }

    /// Projects qubit `q` onto the normalized single-qubit vector `ket`.
    pub fn project_qubit(&self, q: usize, ket: [C; 2]) -> Result<(f64, DenseState)> {
        let proj = [
            [ket[0] * ket[0].conj(), ket[0] * ket[1].conj()],
            [ket[1] * ket[0].conj(), ket[1] * ket[1].conj()],
        ];
        let mut out = self.clone();
        out.apply_single(q, &proj)?;
        let prob = out.trace_or_norm();
        if prob < MIN_BRANCH_PROBABILITY {
            return Err(Error::ImpossibleOutcome {
                label: format!("qubit {q} projector"),
                outcome: 1,
                p: prob,
            });
        }
        out.scale(1.0 / prob);
        Ok((prob, out))
    }

    fn trace_or_norm(&self) -> f64 {
        match self {
            DenseState::Pure { amps, .. } => amps.iter().map(|a| a.norm_sqr()).sum(),
            DenseState::Mixed { n, rho } => {
                let dim = 1usize << n;
                (0..dim).map(|k| rho[k * dim + k].re).sum()
            }
        }
    }

    /// Reduced 2×2 density matrix of qubit `q`.
    pub fn reduced_qubit(&self, q: usize) -> Result<Matrix2> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let mut out = [[ZERO; 2]; 2];
        match self {
            DenseState::Pure { amps, .. } => {
                for k in 0..amps.len() {
                    if k & bit == 0 {
                        let (a0, a1) = (amps[k], amps[k | bit]);
                        out[0][0] += a0 * a0.conj();
                        out[0][1] += a0 * a1.conj();
                        out[1][0] += a1 * a0.conj();
                        out[1][1] += a1 * a1.conj();
                    }
                }
            }
            DenseState::Mixed { n, rho } => {
                let dim = 1usize << n;
                for k in 0..dim {
                    if k & bit == 0 {
                        for (i, r) in [k, k | bit].into_iter().enumerate() {
                            for (j, c) in [k, k | bit].into_iter().enumerate() {
                                out[i][j] += rho[r * dim + c];
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Convex mixture `(1 − ε) ρ + ε I / 2^n`.
    pub fn depolarize(&self, eps: f64) -> Result<DenseState> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::Usage(format!("noise strength {eps} outside [0, 1]")));
        }
        let n = self.num_qubits();
        let dim = 1usize << n;
        let mut rho = self.density_matrix()?;
        for (i, v) in rho.iter_mut().enumerate() {
            *v *= 1.0 - eps;
            if i / dim == i % dim {
                *v += eps / dim as f64;
            }
        }
        Ok(DenseState::Mixed { n, rho })
    }

    pub fn dump(&self) -> AmplitudeDump {
        match self {
            DenseState::Pure { n, amps } => AmplitudeDump {
                n: *n,
                order: "little-endian, qubit 0 fastest",
                kind: "pure",
                entries: amps.iter().map(|a| [a.re, a.im]).collect(),
            },
            DenseState::Mixed { n, rho } => AmplitudeDump {
                n: *n,
                order: "little-endian, qubit 0 fastest; row-major",
                kind: "density",
                entries: rho.iter().map(|a| [a.re, a.im]).collect(),
            },
        }
    }
}

/// Serializable amplitude or density-matrix dump.
#[derive(Clone, Debug, Serialize)]
pub struct AmplitudeDump {
    pub n: usize,
    pub order: &'static str,
    pub kind: &'static str,
    pub entries: Vec<[f64; 2]>,
}

fn stabilizer_state(list: &[PauliObservable], n: usize) -> Result<DenseState> {
    check_size("pure states", n, MAX_PURE_QUBITS)?;
    if list.len() > MAX_STABILIZER_GENERATORS {
        return Err(Error::Stabilizer(format!(
            "at most {MAX_STABILIZER_GENERATORS} generators supported"
        )));
    }
    for g in list {
        if g.num_qubits() != n {
            return Err(Error::Dimension {
                expected: n,
                found: g.num_qubits(),
            });
        }
        if !g.is_hermitian() {
            return Err(Error::NonHermitian(g.to_string()));
        }
    }
    for (i, a) in list.iter().enumerate() {
        for b in &list[i + 1..] {
            if !a.commutes(b)? {
                return Err(Error::Stabilizer(format!("{a} and {b} do not commute")));
            }
        }
    }

    // tr Π (I + g_i)/2 = 2^{n-k} (#{S : g_S = +I} − #{S : g_S = −I})
    let k = list.len();
    let mut balance: i64 = 0;
    for mask in 0u32..1 << k {
        let mut prod = PauliObservable::identity(n);
        for (i, g) in list.iter().enumerate() {
            if mask >> i & 1 == 1 {
                prod = prod.multiply(g)?;
            }
        }
        if prod.is_identity() {
            balance += if prod.sign() == Some(1) { 1 } else { -1 };
        }
    }
    let rank = if n >= k {
        balance as f64 * (1u64 << (n - k)) as f64
    } else {
        balance as f64 / (1u64 << (k - n)) as f64
    };
    if rank < 0.5 {
        return Err(Error::Stabilizer(
            "generators are inconsistent (empty joint eigenspace)".into(),
        ));
    }
    if rank > 1.5 {
        return Err(Error::Stabilizer(format!(
            "joint +1 eigenspace has dimension {rank}, not 1"
        )));
    }

    let dim = 1usize << n;
    let actions: Vec<PauliAction> = list.iter().map(PauliAction::new).collect();
    for start in 0..dim {
        let mut v = vec![ZERO; dim];
        v[start] = ONE;
        for t in &actions {
            let pv = t.apply(&v);
            v.iter_mut().zip(pv).for_each(|(a, b)| *a = (*a + b) * 0.5);
        }
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        if norm * dim as f64 >= 1.0 - 1e-9 {
            let s = 1.0 / norm.sqrt();
            v.iter_mut().for_each(|a| *a *= s);
            return Ok(DenseState::Pure { n, amps: v });
        }
    }
    unreachable!("a rank-one projector has a diagonal entry of at least 2^-n")
}

/// Three-qubit GHZ state fixed by `XXX, −XZZ, −ZXZ, −ZZX`.
pub fn ghz_state() -> DenseState {
    let list = ["XXX", "-XZZ", "-ZXZ", "-ZZX"].map(|s| s.parse().expect("valid label"));
    stabilizer_state(&list, 3).expect("GHZ generators are consistent")
}

/// State fidelity. Pure/pure is `|⟨a|b⟩|²`, pure/mixed is `⟨ψ|ρ|ψ⟩`,
/// mixed/mixed is `(tr √(√ρ σ √ρ))²`.
pub fn fidelity(a: &DenseState, b: &DenseState) -> Result<f64> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::Dimension {
            expected: a.num_qubits(),
            found: b.num_qubits(),
        });
    }
    let dim = 1usize << a.num_qubits();
    let f = match (a, b) {
        (DenseState::Pure { amps: x, .. }, DenseState::Pure { amps: y, .. }) => {
            x.iter().zip(y).map(|(p, q)| p.conj() * q).sum::<C>().norm_sqr()
        }
        (DenseState::Pure { amps, .. }, DenseState::Mixed { rho, .. })
        | (DenseState::Mixed { rho, .. }, DenseState::Pure { amps, .. }) => {
            let mut acc = ZERO;
            for r in 0..dim {
                for c in 0..dim {
                    acc += amps[r].conj() * rho[r * dim + c] * amps[c];
                }
            }
            acc.re
        }
        (DenseState::Mixed { rho: x, .. }, DenseState::Mixed { rho: y, .. }) => {
            let rho = DMatrix::from_row_slice(dim, dim, x);
            let sigma = DMatrix::from_row_slice(dim, dim, y);
            let eig = rho.symmetric_eigen();
            let sqrt_vals = eig.eigenvalues.map(|l| C::new(l.max(0.0).sqrt(), 0.0));
            let sqrt_rho = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.adjoint();
            let m = &sqrt_rho * sigma * &sqrt_rho;
            let m = (&m + m.adjoint()) * C::new(0.5, 0.0);
            let t: f64 = m.symmetric_eigenvalues().iter().map(|l| l.max(0.0).sqrt()).sum();
            t * t
        }
    };
    Ok(f.clamp(0.0, 1.0))
}

/// Fidelity of a 2×2 density matrix with a pure single-qubit state.
pub fn qubit_fidelity(rho: &Matrix2, ket: [C; 2]) -> f64 {
    let mut acc = ZERO;
    for r in 0..2 {
        for c in 0..2 {
            acc += ket[r].conj() * rho[r][c] * ket[c];
        }
    }
    acc.re
}

/// Exact joint outcome distribution of a sequence of Pauli measurements,
/// keyed by strings over `+`/`-`. Zero-probability branches are omitted.
pub fn born_joint_distribution(state: &DenseState, measurements: &[PauliObservable]) -> Result<BTreeMap<String, f64>> {
    fn go(
        state: &DenseState,
        rest: &[PauliObservable],
        weight: f64,
        prefix: &mut String,
        out: &mut BTreeMap<String, f64>,
    ) -> Result<()> {
        let Some((p, tail)) = rest.split_first() else {
            out.insert(prefix.clone(), weight);
            return Ok(());
        };
        for (s, ch) in [(1i8, '+'), (-1, '-')] {
            match state.project(p, s) {
                Ok((prob, next)) => {
                    prefix.push(ch);
                    go(&next, tail, weight * prob, prefix, out)?;
                    prefix.pop();
                }
                Err(Error::ImpossibleOutcome { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }
    let mut out = BTreeMap::new();
    go(state, measurements, 1.0, &mut String::new(), &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hvm::shot_rng;
    use crate::pauli::{symplectic_form, BitString2n};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn p(s: &str) -> PauliObservable {
        s.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    /// Dense matrix of a Pauli, column k = T|k⟩.
    fn dense(op: &PauliObservable) -> DMatrix<C> {
        let n = op.num_qubits();
        let dim = 1 << n;
        let mut m = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            let mut v = vec![ZERO; dim];
            v[k] = ONE;
            for (r, a) in PauliAction::new(op).apply(&v).into_iter().enumerate() {
                m[(r, k)] = a;
            }
        }
        m
    }

    /// Kronecker construction from single-qubit matrices, qubit 0 least significant.
    fn kron_reference(op: &PauliObservable) -> DMatrix<C> {
        let n = op.num_qubits();
        let mut m = DMatrix::from_element(1, 1, ONE);
        for q in (0..n).rev() {
            let f: [[C; 2]; 2] = match op.factor(q).symbol() {
                "I" => [[ONE, ZERO], [ZERO, ONE]],
                "X" => [[ZERO, ONE], [ONE, ZERO]],
                "Y" => [[ZERO, -I], [I, ZERO]],
                _ => [[ONE, ZERO], [ZERO, -ONE]],
            };
            let f = DMatrix::from_row_slice(2, 2, &[f[0][0], f[0][1], f[1][0], f[1][1]]);
            m = m.kronecker(&f);
        }
        m * i_pow(op.phase() as u32)
    }

    #[test]
    fn dense_paulis_match_kronecker_products() {
        for n in 1..=3 {
            for a in BitString2n::all(n) {
                let op = PauliObservable::from_label(a);
                let m = dense(&op);
                assert!((&m - kron_reference(&op)).iter().all(|e| e.norm() < 1e-14), "{op}");
                assert!((&m - m.adjoint()).iter().all(|e| e.norm() < 1e-14));
                let sq = &m * &m;
                assert!((sq - DMatrix::identity(1 << n, 1 << n))
                    .iter()
                    .all(|e| e.norm() < 1e-14));
            }
        }
    }

    #[test]
    fn dense_commutation_and_products_match_symplectic_algebra() {
        for n in 1..=2 {
            for a in BitString2n::all(n) {
                for b in BitString2n::all(n) {
                    let (pa, pb) = (
                        PauliObservable::from_label(a.clone()),
                        PauliObservable::from_label(b.clone()),
                    );
                    let (ma, mb) = (dense(&pa), dense(&pb));
                    let ab = &ma * &mb;
                    let sign = if symplectic_form(&a, &b).unwrap() { -ONE } else { ONE };
                    assert!((&ab - (&mb * &ma) * sign).iter().all(|e| e.norm() < 1e-14));
                    assert!((&ab - dense(&pa.multiply(&pb).unwrap()))
                        .iter()
                        .all(|e| e.norm() < 1e-14));
                }
            }
        }
    }

    #[test]
    fn prepare_examples() {
        let ghz = ghz_state();
        assert_abs_diff_eq!(ghz.pauli_expectation(&p("XXX")).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ghz.pauli_expectation(&p("XZZ")).unwrap(), -1.0, epsilon = 1e-12);
        for g in ["XXX", "-XZZ", "-ZXZ", "-ZZX"] {
            let (prob, _) = ghz.project(&p(g), 1).unwrap();
            assert_abs_diff_eq!(prob, 1.0, epsilon = 1e-10);
        }
        let z = DenseState::zeros(2).unwrap();
        assert_eq!(z.pauli_expectation(&p("ZI")).unwrap(), 1.0);
        assert_eq!(z.pauli_expectation(&p("IZ")).unwrap(), 1.0);
        let mm = DenseState::maximally_mixed(2).unwrap();
        for a in BitString2n::all(2).skip(1) {
            assert_eq!(mm.pauli_expectation(&PauliObservable::from_label(a)).unwrap(), 0.0);
        }
        assert_eq!(mm.pauli_expectation(&p("II")).unwrap(), 1.0);
    }

    #[test]
    fn stabilizer_errors() {
        let err = DenseState::prepare(&StatePrep::Stabilizers(vec![p("X"), p("Z")]), 1).unwrap_err();
        assert!(matches!(err, Error::Stabilizer(_)));
        let err = DenseState::prepare(&StatePrep::Stabilizers(vec![p("XX")]), 2).unwrap_err();
        assert!(err.to_string().contains("dimension"));
        let err = DenseState::prepare(&StatePrep::Stabilizers(vec![p("Z"), p("-Z")]), 1).unwrap_err();
        assert!(err.to_string().contains("inconsistent"));
        let bell = DenseState::prepare(&StatePrep::Stabilizers(vec![p("XX"), p("-YY")]), 2).unwrap();
        assert_abs_diff_eq!(bell.pauli_expectation(&p("ZZ")).unwrap(), 1.0, epsilon = 1e-12);
        // redundant generators are fine
        let s = DenseState::prepare(&StatePrep::Stabilizers(vec![p("Z"), p("Z")]), 1).unwrap();
        assert_abs_diff_eq!(s.pauli_expectation(&p("Z")).unwrap(), 1.0, epsilon = 1e-12);
        assert!(DenseState::prepare(&StatePrep::Zeros, 15).is_err());
        assert!(DenseState::prepare(&StatePrep::MaximallyMixed, 8).is_err());
        assert!(DenseState::prepare(&StatePrep::Custom(vec![ONE, ONE]), 1).is_err());
    }

    #[test]
    fn gate_examples() {
        let mut s = DenseState::zeros(1).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        assert_abs_diff_eq!(s.pauli_expectation(&p("X")).unwrap(), 1.0, epsilon = 1e-12);
        s.apply_gate(&Gate::T(0)).unwrap();
        assert_abs_diff_eq!(s.pauli_expectation(&p("X")).unwrap(), FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(s.pauli_expectation(&p("Y")).unwrap(), FRAC_1_SQRT_2, epsilon = 1e-12);

        let mut cl = DenseState::zeros(2).unwrap();
        cl.apply_gates(&[Gate::H(0), Gate::H(1), Gate::CZ(0, 1)]).unwrap();
        assert_abs_diff_eq!(cl.pauli_expectation(&p("XZ")).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cl.pauli_expectation(&p("ZX")).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cl.pauli_expectation(&p("XI")).unwrap(), 0.0, epsilon = 1e-12);
        assert!(cl.apply_gate(&Gate::H(2)).is_err());
    }

    #[test]
    fn clifford_gates_agree_with_conjugation_tables() {
        // U P U† expectation on U|ψ⟩ equals P on |ψ⟩ for a generic state
        let mut rng = shot_rng(3, 0);
        let amps: Vec<C> = (0..8)
            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let psi = DenseState::pure(3, amps.iter().map(|a| a / norm).collect()).unwrap();
        let gates = [
            Gate::H(1),
            Gate::S(0),
            Gate::X(2),
            Gate::Y(0),
            Gate::Z(1),
            Gate::CZ(0, 2),
        ];
        for g in gates {
            let mut moved = psi.clone();
            moved.apply_gate(&g).unwrap();
            for a in BitString2n::all(3) {
                let op = PauliObservable::from_label(a);
                let image = g.conjugate(&op).unwrap();
                assert_abs_diff_eq!(
                    moved.pauli_expectation(&image).unwrap(),
                    psi.pauli_expectation(&op).unwrap(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn measurement_examples() {
        let z = DenseState::zeros(1).unwrap();
        let mut rng = shot_rng(1, 0);
        let (s, _, prob) = z.measure_pauli(&p("Z"), &mut rng).unwrap();
        assert_eq!((s, prob), (1, 1.0));

        let mm = DenseState::maximally_mixed(1).unwrap();
        for s in [1i8, -1] {
            let (prob, post) = mm.project(&p("X"), s).unwrap();
            assert_abs_diff_eq!(prob, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(post.pauli_expectation(&p("X")).unwrap(), s as f64, epsilon = 1e-15);
        }
        let (s, _, prob) = ghz_state().measure_pauli(&p("XXX"), &mut rng).unwrap();
        assert_eq!(s, 1);
        assert_abs_diff_eq!(prob, 1.0, epsilon = 1e-10);
        assert!(matches!(z.project(&p("Z"), -1), Err(Error::ImpossibleOutcome { .. })));
    }

    #[test]
    fn repeatability_and_idempotence() {
        let ghz = ghz_state();
        for state in [ghz.clone(), ghz.to_mixed().unwrap()] {
            let (_, once) = state.project(&p("XZI"), -1).unwrap();
            let (prob, twice) = once.project(&p("XZI"), -1).unwrap();
            assert_abs_diff_eq!(prob, 1.0, epsilon = 1e-12);
            let a = once.density_matrix().unwrap();
            let b = twice.density_matrix().unwrap();
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-12));
        }
    }

    #[test]
    fn sampled_measurements_reproduce_expectation() {
        let mut s = DenseState::zeros(1).unwrap();
        s.apply_gates(&[Gate::H(0), Gate::T(0)]).unwrap();
        let x = p("X");
        let exact = s.pauli_expectation(&x).unwrap();
        let shots = 100_000;
        let mut rng = shot_rng(99, 0);
        let sum: i64 = (0..shots)
            .map(|_| s.measure_pauli(&x, &mut rng).unwrap().0 as i64)
            .sum();
        let sigma = ((1.0 - exact * exact) / shots as f64).sqrt();
        assert!((sum as f64 / shots as f64 - exact).abs() < 4.0 * sigma);
    }

    #[test]
    fn fidelity_examples() {
        let zero = DenseState::zeros(1).unwrap();
        let mut one = zero.clone();
        one.apply_gate(&Gate::X(0)).unwrap();
        let mut plus = zero.clone();
        plus.apply_gate(&Gate::H(0)).unwrap();
        assert_abs_diff_eq!(fidelity(&zero, &zero).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fidelity(&zero, &one).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fidelity(&plus, &zero).unwrap(), 0.5, epsilon = 1e-12);
        let pm = plus.to_mixed().unwrap();
        let zm = zero.to_mixed().unwrap();
        assert_abs_diff_eq!(fidelity(&pm, &zm).unwrap(), 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(fidelity(&plus, &zm).unwrap(), 0.5, epsilon = 1e-12);
        let mm = DenseState::maximally_mixed(1).unwrap();
        assert_abs_diff_eq!(fidelity(&mm, &mm).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fidelity(&mm, &zm).unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn reduced_and_depolarized() {
        let ghz = ghz_state();
        let r = ghz.reduced_qubit(1).unwrap();
        assert_abs_diff_eq!(r[0][0].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r[0][1].norm(), 0.0, epsilon = 1e-12);
        let noisy = ghz.depolarize(0.1).unwrap();
        assert_abs_diff_eq!(noisy.pauli_expectation(&p("XXX")).unwrap(), 0.9, epsilon = 1e-12);
        let rm = noisy.reduced_qubit(0).unwrap();
        assert_abs_diff_eq!(rm[1][1].re, 0.5, epsilon = 1e-12);
        assert!(ghz.depolarize(1.5).is_err());
        assert!(DenseState::mixed(3, noisy.density_matrix().unwrap()).is_ok());
    }

    #[test]
    fn born_chain_on_mixed_state() {
        let mm = DenseState::maximally_mixed(1).unwrap();
        let d = born_joint_distribution(&mm, &[p("X"), p("Z"), p("Z")]).unwrap();
        assert_eq!(d.len(), 4);
        for v in d.values() {
            assert_abs_diff_eq!(*v, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn dump_is_little_endian() {
        let mut s = DenseState::zeros(2).unwrap();
        s.apply_gate(&Gate::X(0)).unwrap();
        let d = s.dump();
        assert_eq!(d.entries[1], [1.0, 0.0]);
        assert_eq!(d.entries[2], [0.0, 0.0]);
    }

    proptest! {
        #[test]
        fn pure_and_mixed_expectations_agree(
            re in prop::collection::vec(-1.0f64..1.0, 8),
            im in prop::collection::vec(-1.0f64..1.0, 8),
            idx in 0usize..64,
        ) {
            let amps: Vec<C> = re.iter().zip(&im).map(|(&a, &b)| c(a, b)).collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-3);
            let psi = DenseState::pure(3, amps.iter().map(|a| a / norm).collect()).unwrap();
            let op = PauliObservable::from_label(BitString2n::from_index(3, idx));
            let a = psi.pauli_expectation(&op).unwrap();
            let b = psi.to_mixed().unwrap().pauli_expectation(&op).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!(a.abs() <= 1.0 + 1e-12);
        }
    }
}
