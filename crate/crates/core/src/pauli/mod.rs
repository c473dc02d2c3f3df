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

//! Binary-symplectic representation of the n-qubit Pauli group.
//!
//! A Pauli operator is stored as a pair of bit strings `(z, x)` together with
//! a phase exponent `k` (mod 4). The operator it denotes is
//!
//! ```text
//!     i^k · ξ(z, x) · Z(z) X(x),      ξ(z, x) = (-i)^{|z ∧ x|}
//! ```
//!
//! With this convention the operator with `k = 0` is always Hermitian, the
//! label `(1, 1)` on one qubit is exactly `Y`, and operators on disjoint
//! supports multiply without picking up a phase. Qubit `i` corresponds to the
//! `i`-th character of the text form and to bit `i` of a basis-state index.

mod convention;

pub use convention::{normalize_convention, NormalizedConvention};

use std::fmt;
use std::ops::BitXor;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// A `2n`-bit string `(z, x)`: the label of a Pauli operator, an internal
/// hidden-variable state, or a translation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString2n {
    n: usize,
    z: Vec<u64>,
    x: Vec<u64>,
}

impl BitString2n {
    pub fn zero(n: usize) -> Self {
        let w = words_for(n);
        BitString2n {
            n,
            z: vec![0; w],
            x: vec![0; w],
        }
    }

    /// Builds a label from per-qubit bits.
    pub fn from_bits(z: &[bool], x: &[bool]) -> Result<Self> {
        if z.len() != x.len() {
            return Err(Error::Dimension {
                expected: z.len(),
                found: x.len(),
            });
        }
        let mut out = Self::zero(z.len());
        for q in 0..z.len() {
            out.set(q, z[q], x[q]);
        }
        Ok(out)
    }

    /// Packs the label into an integer index `z | x << n`. Only valid for
    /// `n <= 32`; used to address dense tables over `Z_2^{2n}`.
    pub fn to_index(&self) -> usize {
        debug_assert!(self.n <= 32);
        let mask = if self.n == 0 { 0 } else { u64::MAX >> (64 - self.n) };
        let z = self.z.first().copied().unwrap_or(0) & mask;
        let x = self.x.first().copied().unwrap_or(0) & mask;
        (z | (x << self.n)) as usize
    }

    pub fn from_index(n: usize, index: usize) -> Self {
        debug_assert!(n <= 32);
        let mut out = Self::zero(n);
        if n > 0 {
            let mask = u64::MAX >> (64 - n);
            out.z[0] = index as u64 & mask;
            out.x[0] = (index as u64 >> n) & mask;
        }
        out
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn z(&self, q: usize) -> bool {
        self.z[q / WORD] >> (q % WORD) & 1 == 1
    }

    pub fn x(&self, q: usize) -> bool {
        self.x[q / WORD] >> (q % WORD) & 1 == 1
    }

    pub fn set(&mut self, q: usize, z: bool, x: bool) {
        let (w, b) = (q / WORD, q % WORD);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
    }

    pub fn is_zero(&self) -> bool {
        self.z.iter().chain(&self.x).all(|&w| w == 0)
    }

    /// Number of qubits on which the label acts non-trivially.
    pub fn weight(&self) -> usize {
        self.z
            .iter()
            .zip(&self.x)
            .map(|(z, x)| (z | x).count_ones() as usize)
            .sum()
    }

    /// `|z ∧ x|`, the number of `Y` factors.
    pub fn overlap(&self) -> u32 {
        self.z.iter().zip(&self.x).map(|(z, x)| (z & x).count_ones()).sum()
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// XOR that reports mismatched sizes instead of panicking.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self ^ other)
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.n, other.n, "label sizes differ");
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
    }

    /// Iterates over all `4^n` labels in index order. Only for small `n`.
    pub fn all(n: usize) -> impl Iterator<Item = BitString2n> {
        assert!(n <= 16, "label enumeration is limited to 16 qubits");
        (0..1usize << (2 * n)).map(move |i| BitString2n::from_index(n, i))
    }
}

impl BitXor for &BitString2n {
    type Output = BitString2n;

    fn bitxor(self, rhs: &BitString2n) -> BitString2n {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl fmt::Debug for BitString2n {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString2n(")?;
        for q in 0..self.n {
            f.write_str(Pauli1::from_bits(self.z(q), self.x(q)).symbol())?;
        }
        write!(f, ")")
    }
}

/// Symplectic form `[a, b] = a_X·b_Z + a_Z·b_X (mod 2)`.
pub fn symplectic_form(a: &BitString2n, b: &BitString2n) -> Result<bool> {
    a.check_same(b)?;
    Ok(symplectic_unchecked(a, b))
}

pub(crate) fn symplectic_unchecked(a: &BitString2n, b: &BitString2n) -> bool {
    let mut acc = 0u32;
    for i in 0..a.z.len() {
        acc += (a.x[i] & b.z[i]).count_ones() + (a.z[i] & b.x[i]).count_ones();
    }
    acc & 1 == 1
}

/// Symplectic form on packed indices `z | x << n`.
#[inline]
pub fn symplectic_index(a: usize, b: usize, n: usize) -> bool {
    let mask = (1usize << n) - 1;
    let (az, ax) = (a & mask, a >> n);
    let (bz, bx) = (b & mask, b >> n);
    ((ax & bz).count_ones() + (az & bx).count_ones()) & 1 == 1
}

/// Phase exponent `k` such that `i^k Z(a_Z) X(a_X)` is Hermitian under the
/// default convention: `k = -|a_Z ∧ a_X| mod 4`.
pub fn default_phase(a: &BitString2n) -> u8 {
    ((4 - (a.overlap() % 4)) % 4) as u8
}

/// Single-qubit Pauli factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli1 {
    I,
    X,
    Y,
    Z,
}

impl Pauli1 {
    pub fn from_bits(z: bool, x: bool) -> Self {
        match (z, x) {
            (false, false) => Pauli1::I,
            (false, true) => Pauli1::X,
            (true, true) => Pauli1::Y,
            (true, false) => Pauli1::Z,
        }
    }

    /// `(z, x)` bits.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli1::I => (false, false),
            Pauli1::X => (false, true),
            Pauli1::Y => (true, true),
            Pauli1::Z => (true, false),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Pauli1::I => "I",
            Pauli1::X => "X",
            Pauli1::Y => "Y",
            Pauli1::Z => "Z",
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli1::I),
            'X' => Some(Pauli1::X),
            'Y' => Some(Pauli1::Y),
            'Z' => Some(Pauli1::Z),
            _ => None,
        }
    }
}

/// A phased Pauli operator `i^phase · T_label`.
///
/// Only `phase ∈ {0, 2}` describes an observable; odd phases show up as
/// intermediate products of anticommuting operators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliObservable {
    label: BitString2n,
    phase: u8,
}

impl PauliObservable {
    pub fn identity(n: usize) -> Self {
        PauliObservable {
            label: BitString2n::zero(n),
            phase: 0,
        }
    }

    /// The Hermitian observable `T_label`.
    pub fn from_label(label: BitString2n) -> Self {
        PauliObservable { label, phase: 0 }
    }

    pub fn with_phase(label: BitString2n, phase: u8) -> Self {
        PauliObservable {
            label,
            phase: phase % 4,
        }
    }

    /// `sign · σ` acting on qubit `q` of `n`.
    pub fn single(n: usize, q: usize, p: Pauli1) -> Result<Self> {
        if q >= n {
            return Err(Error::QubitIndex { index: q, n });
        }
        let mut label = BitString2n::zero(n);
        let (z, x) = p.bits();
        label.set(q, z, x);
        Ok(Self::from_label(label))
    }

    /// Builds a tensor product from per-qubit factors.
    pub fn from_factors(factors: &[Pauli1]) -> Self {
        let mut label = BitString2n::zero(factors.len());
        for (q, p) in factors.iter().enumerate() {
            let (z, x) = p.bits();
            label.set(q, z, x);
        }
        Self::from_label(label)
    }

    pub fn label(&self) -> &BitString2n {
        &self.label
    }

    pub fn into_label(self) -> BitString2n {
        self.label
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn num_qubits(&self) -> usize {
        self.label.n
    }

    pub fn factor(&self, q: usize) -> Pauli1 {
        Pauli1::from_bits(self.label.z(q), self.label.x(q))
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// `+1` or `-1` for observables, `None` for `±i` multiples.
    pub fn sign(&self) -> Option<i8> {
        match self.phase {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.label.is_zero()
    }

    pub fn negate(&self) -> Self {
        Self::with_phase(self.label.clone(), self.phase + 2)
    }

    /// Rejects non-Hermitian products.
    pub fn into_observable(self) -> Result<Self> {
        if self.is_hermitian() {
            Ok(self)
        } else {
            Err(Error::NonHermitian(self.to_string()))
        }
    }

    /// Exact operator product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.label.check_same(&other.label)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let a = &self.label;
        let b = &other.label;
        let c = a ^ b;
        // Z(az)X(ax) Z(bz)X(bx) = (-1)^{ax·bz} Z(az+bz) X(ax+bx)
        let mut cross = 0u32;
        for i in 0..a.z.len() {
            cross += (a.x[i] & b.z[i]).count_ones();
        }
        let k = self.phase as i64 + other.phase as i64 - a.overlap() as i64 - b.overlap() as i64
            + 2 * cross as i64
            + c.overlap() as i64;
        PauliObservable {
            label: c,
            phase: k.rem_euclid(4) as u8,
        }
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        Ok(!symplectic_form(&self.label, &other.label)?)
    }

    /// Weight of the underlying label.
    pub fn weight(&self) -> usize {
        self.label.weight()
    }

    /// Qubits on which the operator acts non-trivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits())
            .filter(|&q| self.factor(q) != Pauli1::I)
            .collect()
    }
}

impl fmt::Display for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })?;
        for q in 0..self.num_qubits() {
            f.write_str(self.factor(q).symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliObservable({self})")
    }
}

impl FromStr for PauliObservable {
    type Err = Error;

    /// Parses an optional sign (`+`, `-` or `−`) followed by `I/X/Y/Z`
    /// characters. Whitespace inside the string is ignored.
    fn from_str(text: &str) -> Result<Self> {
        let syntax = |reason: &str| Error::PauliSyntax {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let s = text.trim();
        let (negative, body) = if let Some(rest) = s.strip_prefix('+') {
            (false, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (true, rest)
        } else if let Some(rest) = s.strip_prefix('\u{2212}') {
            (true, rest)
        } else {
            (false, s)
        };
        let mut factors = Vec::new();
        for c in body.chars().filter(|c| !c.is_whitespace()) {
            factors.push(Pauli1::from_char(c).ok_or_else(|| syntax("expected I, X, Y or Z"))?);
        }
        if factors.is_empty() {
            return Err(syntax("empty operator"));
        }
        let p = Self::from_factors(&factors);
        Ok(if negative { p.negate() } else { p })
    }
}

impl Serialize for PauliObservable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliObservable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a Pauli string and checks its qubit count.
pub fn parse_observable(text: &str, n: usize) -> Result<PauliObservable> {
    let p: PauliObservable = text.parse()?;
    if p.num_qubits() != n {
        return Err(Error::Dimension {
            expected: n,
            found: p.num_qubits(),
        });
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliObservable {
        s.parse().unwrap()
    }

    #[test]
    fn symplectic_examples() {
        assert!(symplectic_form(p("X").label(), p("Z").label()).unwrap());
        assert!(!symplectic_form(p("XI").label(), p("IZ").label()).unwrap());
        for a in BitString2n::all(2) {
            assert!(!symplectic_form(&a, &a).unwrap());
        }
        assert!(symplectic_form(p("X").label(), p("XI").label()).is_err());
    }

    #[test]
    fn default_phase_examples() {
        let y = BitString2n::from_bits(&[true], &[true]).unwrap();
        assert_eq!(default_phase(&y), 3);
        let x = BitString2n::from_bits(&[false], &[true]).unwrap();
        assert_eq!(default_phase(&x), 0);
        let yy = BitString2n::from_bits(&[true, true], &[true, true]).unwrap();
        assert_eq!(default_phase(&yy), 2);
    }

    #[test]
    fn multiply_examples() {
        let xx = p("X").multiply(&p("X")).unwrap();
        assert!(xx.is_identity());
        assert_eq!(xx.phase(), 0);

        assert_eq!(p("XI").multiply(&p("IZ")).unwrap(), p("XZ"));

        // ZX = iY
        let zx = p("Z").multiply(&p("X")).unwrap();
        assert_eq!(zx.label(), p("Y").label());
        assert_eq!(zx.phase(), 1);
        assert!(zx.clone().into_observable().is_err());
        // XZ = -iY
        assert_eq!(p("X").multiply(&p("Z")).unwrap().phase(), 3);
        // YY on one qubit and Y⊗Y squared
        assert_eq!(p("YY").multiply(&p("YY")).unwrap(), PauliObservable::identity(2));
    }

    #[test]
    fn commutes_examples() {
        assert!(p("X").commutes(&p("X")).unwrap());
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
    }

    #[test]
    fn text_format() {
        let m = p("\u{2212}XZZ");
        assert_eq!(m.sign(), Some(-1));
        assert_eq!(m.to_string(), "-XZZ");
        assert_eq!(p("+Y").label(), &BitString2n::from_bits(&[true], &[true]).unwrap());
        assert!("XQ".parse::<PauliObservable>().is_err());
        assert!("-".parse::<PauliObservable>().is_err());
        assert!(parse_observable("XY", 3).is_err());
    }

    #[test]
    fn index_packing() {
        for a in BitString2n::all(3) {
            assert_eq!(BitString2n::from_index(3, a.to_index()), a);
        }
        let a = p("XZ");
        let b = p("ZZ");
        assert_eq!(
            symplectic_index(a.label().to_index(), b.label().to_index(), 2),
            symplectic_form(a.label(), b.label()).unwrap()
        );
    }

    #[test]
    fn wide_labels() {
        let n = 130;
        let mut fa = vec![Pauli1::I; n];
        let mut fb = vec![Pauli1::I; n];
        fa[127] = Pauli1::X;
        fb[127] = Pauli1::Z;
        fa[129] = Pauli1::Y;
        let a = PauliObservable::from_factors(&fa);
        let b = PauliObservable::from_factors(&fb);
        assert!(!a.commutes(&b).unwrap());
        let ab = a.multiply(&b).unwrap();
        assert_eq!(ab.factor(127), Pauli1::Y);
        assert_eq!(ab.factor(129), Pauli1::Y);
        assert_eq!(ab.phase(), 3);
        assert!(ab.to_string().parse::<PauliObservable>().is_err());
    }

    fn label_strategy(n: usize) -> impl Strategy<Value = BitString2n> {
        (0..1usize << (2 * n)).prop_map(move |i| BitString2n::from_index(n, i))
    }

    fn observable_strategy(n: usize) -> impl Strategy<Value = PauliObservable> {
        (label_strategy(n), any::<bool>()).prop_map(|(l, neg)| {
            let o = PauliObservable::from_label(l);
            if neg {
                o.negate()
            } else {
                o
            }
        })
    }

    #[test]
    fn bilinearity_exhaustive() {
        for n in 1..=2 {
            let all: Vec<_> = BitString2n::all(n).collect();
            for a in &all {
                for b in &all {
                    let ab = a ^ b;
                    for c in &all {
                        let lhs = symplectic_unchecked(&ab, c);
                        let rhs = symplectic_unchecked(a, c) ^ symplectic_unchecked(b, c);
                        assert_eq!(lhs, rhs);
                        assert_eq!(symplectic_unchecked(a, c), symplectic_unchecked(c, a));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn bilinearity_three_qubits(a in label_strategy(3), b in label_strategy(3), c in label_strategy(3)) {
            prop_assert_eq!(
                symplectic_unchecked(&(&a ^ &b), &c),
                symplectic_unchecked(&a, &c) ^ symplectic_unchecked(&b, &c)
            );
        }

        #[test]
        fn commutation_law(a in observable_strategy(3), b in observable_strategy(3)) {
            let ab = a.multiply(&b).unwrap();
            let ba = b.multiply(&a).unwrap();
            let anti = symplectic_form(a.label(), b.label()).unwrap();
            let expected = if anti { ba.negate() } else { ba };
            prop_assert_eq!(ab, expected);
        }

        #[test]
        fn observables_square_to_identity(a in observable_strategy(4)) {
            prop_assert!(a.is_hermitian());
            prop_assert_eq!(a.multiply(&a).unwrap(), PauliObservable::identity(4));
        }

        #[test]
        fn text_round_trip(a in observable_strategy(5)) {
            let back: PauliObservable = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
