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

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid Pauli string {text:?}: {reason}")]
    PauliSyntax { text: String, reason: String },

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("operator {0} is not a Hermitian observable")]
    NonHermitian(String),

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitIndex { index: usize, n: usize },

    #[error("unknown gate {0:?}")]
    UnknownGate(String),

    #[error("gate {0} is not a Clifford gate")]
    NotClifford(String),

    #[error("gate {0} does not preserve the measurable set")]
    NonFreeGate(String),

    #[error(
        "commuting-subset enumeration is limited to {max_observables} observables on at most \
         {max_qubits} qubits (got {observables} on {n}); the local single-qubit scheme has an \
         analytic closure for any n"
    )]
    EnumerationBound {
        observables: usize,
        n: usize,
        max_observables: usize,
        max_qubits: usize,
    },

    #[error("{what} is limited to {max} qubits, got {n}")]
    SizeBound { what: &'static str, n: usize, max: usize },

    #[error("{0} is not inferable in this scheme")]
    NotInferable(String),

    #[error("{0} is not directly measurable in this scheme")]
    NotMeasurable(String),

    #[error("outcome {outcome:+} for {label} has probability {p:e}")]
    ImpossibleOutcome { label: String, outcome: i8, p: f64 },

    #[error("value assignment violates the product rule on context triple ({a}, {b}, {product})")]
    Normalization { a: String, b: String, product: String },

    #[error("scheme has no consistent value assignment")]
    Contextual,

    #[error("stabilizer list rejected: {0}")]
    Stabilizer(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("measurement pattern rejected: {0}")]
    Pattern(String),

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Short machine-readable tag for error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "dimension",
            Error::PauliSyntax { .. } | Error::Parse { .. } => "parse",
            Error::NonHermitian(_) => "non_hermitian",
            Error::QubitIndex { .. } => "index",
            Error::UnknownGate(_) | Error::NotClifford(_) => "gate",
            Error::NonFreeGate(_) => "non_free_gate",
            Error::EnumerationBound { .. } | Error::SizeBound { .. } => "size",
            Error::NotInferable(_) | Error::NotMeasurable(_) => "domain",
            Error::ImpossibleOutcome { .. } => "impossible_outcome",
            Error::Normalization { .. } => "normalization",
            Error::Contextual => "contextual",
            Error::Stabilizer(_) => "stabilizer",
            Error::InvalidState(_) => "state",
            Error::Pattern(_) => "pattern",
            Error::Usage(_) => "usage",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
