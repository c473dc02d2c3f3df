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

//! C ABI for qcsi-lab.
//!
//! Conventions:
//! - Every fallible call returns a [`QcsiStatus`]; results go through out
//!   pointers, which are written only on success.
//! - Objects are opaque heap handles. Release them with the matching
//!   `*_free` function; passing NULL to a free function is a no-op.
//! - Strings are NUL-terminated UTF-8. Pauli labels use the library syntax
//!   (`-XZY`, qubit 0 first).
//! - On failure the message is kept per thread; read it with
//!   [`qcsi_last_error_message`].
//! - Panics never cross the boundary; they are reported as
//!   `QCSI_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qcsi_lab::gate::Gate;
use qcsi_lab::hvm::{exact_measure_update, HiddenVariableModel, HvmDistribution};
use qcsi_lab::oracle::{ghz_state, DenseState};
use qcsi_lab::pauli::{symplectic_form, PauliObservable};
use qcsi_lab::scheme::{analyze, parse_scheme, SchemeSpec};
use qcsi_lab::witness::ghz_report;
use qcsi_lab::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcsiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Dimension = 4,
    /// Observable not measurable or not inferable in the scheme.
    Domain = 5,
    /// Requested outcome has (numerically) zero probability.
    ImpossibleOutcome = 6,
    /// Scheme admits no consistent value assignment.
    Contextual = 7,
    /// Input exceeds a size limit.
    SizeBound = 8,
    InvalidArgument = 9,
    Io = 10,
    Panic = 11,
}

impl From<&Error> for QcsiStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::PauliSyntax { .. } | Error::Parse { .. } | Error::UnknownGate(_) | Error::Json(_) => {
                QcsiStatus::Parse
            }
            Error::Dimension { .. } | Error::QubitIndex { .. } => QcsiStatus::Dimension,
            Error::NotInferable(_) | Error::NotMeasurable(_) | Error::NonFreeGate(_) => QcsiStatus::Domain,
            Error::ImpossibleOutcome { .. } => QcsiStatus::ImpossibleOutcome,
            Error::Contextual | Error::Normalization { .. } => QcsiStatus::Contextual,
            Error::EnumerationBound { .. } | Error::SizeBound { .. } => QcsiStatus::SizeBound,
            Error::Io(_) => QcsiStatus::Io,
            _ => QcsiStatus::InvalidArgument,
        }
    }
}

/// Measurement scheme: measurable observables plus free gates.
pub struct QcsiScheme {
    spec: SchemeSpec,
}

/// Hidden-variable model together with its current distribution over
/// internal states.
pub struct QcsiHvm {
    model: HiddenVariableModel,
    q: HvmDistribution,
}

/// Dense quantum state (pure or density matrix).
pub struct QcsiState {
    state: DenseState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

enum Failure {
    Status(QcsiStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type FfiResult<T> = Result<T, Failure>;

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> QcsiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcsiStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            QcsiStatus::from(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            QcsiStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(QcsiStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(QcsiStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn pauli_arg(p: *const c_char, what: &str) -> FfiResult<PauliObservable> {
    Ok(str_arg(p, what)?.parse()?)
}

unsafe fn obj<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn obj_mut<'a, T>(p: *mut T, what: &str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> FfiResult<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn check_out<T>(out: *mut T, what: &str) -> FfiResult<()> {
    if out.is_null() {
        Err(null(what))
    } else {
        Ok(())
    }
}

/// Message of the last failed call on this thread, or NULL if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qcsi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qcsi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `true` iff the two labels anticommute.
#[no_mangle]
pub unsafe extern "C" fn qcsi_symplectic_form(a: *const c_char, b: *const c_char, out: *mut bool) -> QcsiStatus {
    guard(|| {
        check_out(out, "out")?;
        let (a, b) = (pauli_arg(a, "a")?, pauli_arg(b, "b")?);
        write(out, symplectic_form(a.label(), b.label())?, "out")
    })
}

/// Parses a scheme in the TOML format used by the CLI.
#[no_mangle]
pub unsafe extern "C" fn qcsi_scheme_parse(text: *const c_char, out: *mut *mut QcsiScheme) -> QcsiStatus {
    guard(|| {
        check_out(out, "out")?;
        let spec = parse_scheme(str_arg(text, "text")?)?;
        write(out, Box::into_raw(Box::new(QcsiScheme { spec })), "out")
    })
}

/// The local scheme on `n` qubits: every single-qubit Pauli, gates H and S.
#[no_mangle]
pub unsafe extern "C" fn qcsi_scheme_local(n: usize, out: *mut *mut QcsiScheme) -> QcsiStatus {
    guard(|| {
        check_out(out, "out")?;
        if n == 0 {
            return Err(Failure::Status(
                QcsiStatus::InvalidArgument,
                "n must be positive".into(),
            ));
        }
        write(
            out,
            Box::into_raw(Box::new(QcsiScheme {
                spec: SchemeSpec::local(n),
            })),
            "out",
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn qcsi_scheme_free(scheme: *mut QcsiScheme) {
    if !scheme.is_null() {
        drop(Box::from_raw(scheme));
    }
}

#[no_mangle]
pub unsafe extern "C" fn qcsi_scheme_num_qubits(scheme: *const QcsiScheme, out: *mut usize) -> QcsiStatus {
    guard(|| write(out, obj(scheme, "scheme")?.spec.num_qubits(), "out"))
}

/// Evaluates both scheme conditions: `c1` (a consistent value assignment
/// exists) and `c2` (the inferable set is tomographically complete).
#[no_mangle]
pub unsafe extern "C" fn qcsi_scheme_check(scheme: *const QcsiScheme, c1: *mut bool, c2: *mut bool) -> QcsiStatus {
    guard(|| {
        check_out(c1, "c1")?;
        check_out(c2, "c2")?;
        let report = analyze(&obj(scheme, "scheme")?.spec)?;
        write(c1, report.c1, "c1")?;
        write(c2, report.c2, "c2")
    })
}

/// Model for a consistent scheme, starting from the distribution of the
/// maximally mixed state. Fails with `QCSI_STATUS_CONTEXTUAL` otherwise.
#[no_mangle]
pub unsafe extern "C" fn qcsi_hvm_new(scheme: *const QcsiScheme, out: *mut *mut QcsiHvm) -> QcsiStatus {
    guard(|| {
        check_out(out, "out")?;
        let model = HiddenVariableModel::for_scheme(&obj(scheme, "scheme")?.spec)?;
        let q = HvmDistribution::uniform(model.num_qubits())?;
        write(out, Box::into_raw(Box::new(QcsiHvm { model, q })), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn qcsi_hvm_free(hvm: *mut QcsiHvm) {
    if !hvm.is_null() {
        drop(Box::from_raw(hvm));
    }
}

/// Resets the distribution to that of the maximally mixed state.
#[no_mangle]
pub unsafe extern "C" fn qcsi_hvm_reset(hvm: *mut QcsiHvm) -> QcsiStatus {
    guard(|| {
        let h = obj_mut(hvm, "hvm")?;
        h.q = HvmDistribution::uniform(h.model.num_qubits())?;
        Ok(())
    })
}

/// Model expectation of an inferable observable under the current
/// distribution.
#[no_mangle]
pub unsafe extern "C" fn qcsi_hvm_expectation(hvm: *const QcsiHvm, label: *const c_char, out: *mut f64) -> QcsiStatus {
    guard(|| {
        check_out(out, "out")?;
        let h = obj(hvm, "hvm")?;
        write(out, h.model.expectation(&h.q, &pauli_arg(label, "label")?, 1.0)?, "out")
    })
}

/// Conditions the distribution on outcome `outcome` (+1 or -1) of a
/// measurable observable and reports the outcome probability. The handle is
/// left unchanged on failure.
#[no_mangle]
pub unsafe extern "C" fn qcsi_hvm_measure(
    hvm: *mut QcsiHvm,
    label: *const c_char,
    outcome: i8,
    probability: *mut f64,
) -> QcsiStatus {
    guard(|| {
        check_out(probability, "probability")?;
        let h = obj_mut(hvm, "hvm")?;
        let (p, next) = exact_measure_update(&h.model, &h.q, &pauli_arg(label, "label")?, outcome)?;
        h.q = next;
        write(probability, p, "probability")
    })
}

fn new_state(out: *mut *mut QcsiState, state: DenseState) -> FfiResult<()> {
    unsafe { write(out, Box::into_raw(Box::new(QcsiState { state })), "out") }
}

/// Three-qubit GHZ state stabilized by XXX, -XZZ, -ZXZ, -ZZX.
#[no_mangle]
pub unsafe extern "C" fn qcsi_state_ghz(out: *mut *mut QcsiState) -> QcsiStatus {
    guard(|| {
        check_out(out, "out")?;
        new_state(out, ghz_state())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qcsi_state_zeros(n: usize, out: *mut *mut QcsiState) -> QcsiStatus {
    guard(|| {
        check_out(out, "out")?;
        new_state(out, DenseState::zeros(n)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn qcsi_state_maximally_mixed(n: usize, out: *mut *mut QcsiState) -> QcsiStatus {
    guard(|| {
        check_out(out, "out")?;
        new_state(out, DenseState::maximally_mixed(n)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn qcsi_state_free(state: *mut QcsiState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Applies a gate given as text, e.g. `"H 0"` or `"CZ 0 1"`.
#[no_mangle]
pub unsafe extern "C" fn qcsi_state_apply_gate(state: *mut QcsiState, gate: *const c_char) -> QcsiStatus {
    guard(|| {
        let g: Gate = str_arg(gate, "gate")?.parse()?;
        obj_mut(state, "state")?.state.apply_gate(&g)?;
        Ok(())
    })
}

/// Mixes the state with the maximally mixed state: `(1-eps) rho + eps I/d`.
#[no_mangle]
pub unsafe extern "C" fn qcsi_state_depolarize(state: *mut QcsiState, eps: f64) -> QcsiStatus {
    guard(|| {
        let s = obj_mut(state, "state")?;
        s.state = s.state.depolarize(eps)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qcsi_state_expectation(
    state: *const QcsiState,
    label: *const c_char,
    out: *mut f64,
) -> QcsiStatus {
    guard(|| {
        check_out(out, "out")?;
        let e = obj(state, "state")?
            .state
            .pauli_expectation(&pauli_arg(label, "label")?)?;
        write(out, e, "out")
    })
}

/// Mermin witness on the (optionally depolarized) GHZ state: quantum value
/// and the maximum over noncontextual assignments.
#[no_mangle]
pub unsafe extern "C" fn qcsi_witness_ghz(noise: f64, quantum: *mut f64, hvm_bound: *mut f64) -> QcsiStatus {
    guard(|| {
        check_out(quantum, "quantum")?;
        check_out(hvm_bound, "hvm_bound")?;
        let r = ghz_report(noise)?;
        write(quantum, r.quantum_value, "quantum")?;
        write(hvm_bound, r.hvm_max, "hvm_bound")
    })
}
