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

//! Contextuality-based classical simulation toolkit: binary-symplectic Pauli
//! algebra, inference closures of measurement schemes, a hidden-variable
//! model for free circuits, a dense-state reference simulator, a GHZ
//! contextuality witness and a cluster-state wire simulator.

pub mod cli;
pub mod error;
pub mod gate;
pub mod hvm;
pub mod mbqc;
pub mod oracle;
pub mod pauli;
pub mod scheme;
pub mod witness;

pub use error::{Error, Result};
