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

//! Scheme files.
//!
//! ```toml
//! n = 2
//! observables = ["+XI", "IX", "ZI", "-IZ"]
//! gates = ["H 0", "S 1"]
//! ```

use serde::Deserialize;
use toml::Spanned;

use super::SchemeSpec;
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::pauli::PauliObservable;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeFile {
    n: Spanned<usize>,
    #[serde(default)]
    observables: Vec<Spanned<String>>,
    #[serde(default)]
    gates: Vec<Spanned<String>>,
}

/// 1-based line and column of a byte offset.
pub(crate) fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn at(text: &str, offset: usize, message: String) -> Error {
    let (line, column) = line_col(text, offset);
    Error::Parse { line, column, message }
}

/// Parses and validates a scheme file.
pub fn parse_scheme(text: &str) -> Result<SchemeSpec> {
    let file: SchemeFile = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        at(text, offset, e.message().to_string())
    })?;
    let n = *file.n.get_ref();
    if n == 0 {
        return Err(at(text, file.n.span().start, "n must be at least 1".into()));
    }

    let mut observables = Vec::with_capacity(file.observables.len());
    for item in &file.observables {
        let o: PauliObservable = item
            .get_ref()
            .parse()
            .map_err(|e: Error| at(text, item.span().start, e.to_string()))?;
        if o.num_qubits() != n {
            return Err(at(
                text,
                item.span().start,
                format!(
                    "observable {:?} has {} qubits, expected {n}",
                    item.get_ref(),
                    o.num_qubits()
                ),
            ));
        }
        observables.push(o);
    }

    let mut gates = Vec::with_capacity(file.gates.len());
    for item in &file.gates {
        let g: Gate = item
            .get_ref()
            .parse()
            .map_err(|e: Error| at(text, item.span().start, e.to_string()))?;
        g.validate(n).map_err(|e| at(text, item.span().start, e.to_string()))?;
        gates.push((g, item.span().start));
    }

    let spec = SchemeSpec::new(n, observables, Vec::new())?;
    for (g, offset) in &gates {
        if !super::check_free_gate(&spec, g).map_err(|e| at(text, *offset, e.to_string()))? {
            return Err(at(
                text,
                *offset,
                format!("gate {g} does not preserve the measurable set"),
            ));
        }
    }
    SchemeSpec::new(n, spec.observables, gates.into_iter().map(|(g, _)| g).collect())
}
