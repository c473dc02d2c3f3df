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

//! Named gates and their symplectic action on Pauli operators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli1, PauliObservable};

/// A named gate with 0-indexed qubit targets.
///
/// `T` denotes `exp(-iπ/8 Z)`; all other gates are Clifford.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    I(usize),
    H(usize),
    S(usize),
    X(usize),
    Y(usize),
    Z(usize),
    T(usize),
    CZ(usize, usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::I(_) => "I",
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::T(_) => "T",
            Gate::CZ(..) => "CZ",
        }
    }

    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::I(q) | Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::T(q) => vec![q],
            Gate::CZ(a, b) => vec![a, b],
        }
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self, Gate::T(_))
    }

    /// Checks target indices against the register size.
    pub fn validate(&self, n: usize) -> Result<()> {
        for q in self.targets() {
            if q >= n {
                return Err(Error::QubitIndex { index: q, n });
            }
        }
        if let Gate::CZ(a, b) = *self {
            if a == b {
                return Err(Error::Usage(format!("CZ needs two distinct qubits, got {a} twice")));
            }
        }
        Ok(())
    }

    /// Heisenberg image `U P U†`.
    pub fn conjugate(&self, p: &PauliObservable) -> Result<PauliObservable> {
        self.conjugate_impl(p, false)
    }

    /// `U† P U`: the observable that, measured before the gate, reproduces a
    /// measurement of `p` after it.
    pub fn conjugate_inverse(&self, p: &PauliObservable) -> Result<PauliObservable> {
        self.conjugate_impl(p, true)
    }

    fn conjugate_impl(&self, p: &PauliObservable, inverse: bool) -> Result<PauliObservable> {
        if !self.is_clifford() {
            return Err(Error::NotClifford(self.to_string()));
        }
        let n = p.num_qubits();
        self.validate(n)?;
        let targets = self.targets();

        // P = rest · Π σ_t with the factors on distinct qubits, so the image
        // is rest · Π image(σ_t).
        let mut rest_label = p.label().clone();
        for &t in &targets {
            rest_label.set(t, false, false);
        }
        let mut out = PauliObservable::with_phase(rest_label, p.phase());
        for &t in &targets {
            let sigma = p.factor(t);
            if sigma == Pauli1::I {
                continue;
            }
            let image = self.factor_image(n, t, sigma, inverse)?;
            out = out.mul_unchecked(&image);
        }
        Ok(out)
    }

    fn factor_image(&self, n: usize, t: usize, sigma: Pauli1, inverse: bool) -> Result<PauliObservable> {
        use Pauli1::{X, Y, Z};
        let single = |p: Pauli1, neg: bool| -> Result<PauliObservable> {
            let o = PauliObservable::single(n, t, p)?;
            Ok(if neg { o.negate() } else { o })
        };
        match *self {
            Gate::I(_) => single(sigma, false),
            Gate::H(_) => match sigma {
                X => single(Z, false),
                Y => single(Y, true),
                _ => single(X, false),
            },
            Gate::S(_) => match (sigma, inverse) {
                (X, false) => single(Y, false),
                (Y, false) => single(X, true),
                (X, true) => single(Y, true),
                (Y, true) => single(X, false),
                _ => single(Z, false),
            },
            Gate::X(_) => single(sigma, sigma != X),
            Gate::Y(_) => single(sigma, sigma != Y),
            Gate::Z(_) => single(sigma, sigma != Z),
            Gate::CZ(a, b) => {
                // X_a -> X_a Z_b, Y_a -> Y_a Z_b, Z_a -> Z_a
                let other = if t == a { b } else { a };
                let base = single(sigma, false)?;
                if sigma == Z {
                    Ok(base)
                } else {
                    Ok(base.mul_unchecked(&PauliObservable::single(n, other, Z)?))
                }
            }
            Gate::T(_) => unreachable!("checked above"),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::CZ(a, b) => write!(f, "CZ {a} {b}"),
            g => write!(f, "{} {}", g.name(), g.targets()[0]),
        }
    }
}

impl FromStr for Gate {
    type Err = Error;

    /// Parses tokens such as `H 0` or `CZ 0 1`.
    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let Some((&name, args)) = tokens.split_first() else {
            return Err(Error::UnknownGate(s.to_string()));
        };
        let index = |t: &str| -> Result<usize> {
            t.parse()
                .map_err(|_| Error::Usage(format!("bad qubit index {t:?} in gate {s:?}")))
        };
        let arity = |k: usize| -> Result<()> {
            if args.len() != k {
                return Err(Error::Usage(format!(
                    "gate {name} takes {k} qubit index(es), got {}",
                    args.len()
                )));
            }
            Ok(())
        };
        let gate = match name.to_ascii_uppercase().as_str() {
            "CZ" => {
                arity(2)?;
                Gate::CZ(index(args[0])?, index(args[1])?)
            }
            one => {
                let ctor: fn(usize) -> Gate = match one {
                    "I" | "ID" => Gate::I,
                    "H" => Gate::H,
                    "S" => Gate::S,
                    "X" => Gate::X,
                    "Y" => Gate::Y,
                    "Z" => Gate::Z,
                    "T" => Gate::T,
                    _ => return Err(Error::UnknownGate(name.to_string())),
                };
                arity(1)?;
                ctor(index(args[0])?)
            }
        };
        Ok(gate)
    }
}

impl Serialize for Gate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Gate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
