/*
 * Copyright 2026 The qcsi-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QCSI_LAB_H
#define QCSI_LAB_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>
#include <stddef.h>

// Result code of every fallible call.
typedef enum QcsiStatus {
  QCSI_STATUS_OK = 0,
  QCSI_STATUS_NULL_POINTER = 1,
  QCSI_STATUS_INVALID_UTF8 = 2,
  QCSI_STATUS_PARSE = 3,
  QCSI_STATUS_DIMENSION = 4,
  // Observable not measurable or not inferable in the scheme.
  QCSI_STATUS_DOMAIN = 5,
  // Requested outcome has (numerically) zero probability.
  QCSI_STATUS_IMPOSSIBLE_OUTCOME = 6,
  // Scheme admits no consistent value assignment.
  QCSI_STATUS_CONTEXTUAL = 7,
  // Input exceeds a size limit.
  QCSI_STATUS_SIZE_BOUND = 8,
  QCSI_STATUS_INVALID_ARGUMENT = 9,
  QCSI_STATUS_IO = 10,
  QCSI_STATUS_PANIC = 11,
} QcsiStatus;

// Hidden-variable model together with its current distribution over
// internal states.
typedef struct QcsiHvm QcsiHvm;

// Measurement scheme: measurable observables plus free gates.
typedef struct QcsiScheme QcsiScheme;

// Dense quantum state (pure or density matrix).
typedef struct QcsiState QcsiState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL if none. The
// pointer stays valid until the next failing call on the same thread.
const char *qcsi_last_error_message(void);

// Library version as a static string.
const char *qcsi_version(void);

// `true` iff the two labels anticommute.
enum QcsiStatus qcsi_symplectic_form(const char *a, const char *b, bool *out);

// Parses a scheme in the TOML format used by the CLI.
enum QcsiStatus qcsi_scheme_parse(const char *text, struct QcsiScheme **out);

// The local scheme on `n` qubits: every single-qubit Pauli, gates H and S.
enum QcsiStatus qcsi_scheme_local(uintptr_t n, struct QcsiScheme **out);

void qcsi_scheme_free(struct QcsiScheme *scheme);

enum QcsiStatus qcsi_scheme_num_qubits(const struct QcsiScheme *scheme, uintptr_t *out);

// Evaluates both scheme conditions: `c1` (a consistent value assignment
// exists) and `c2` (the inferable set is tomographically complete).
enum QcsiStatus qcsi_scheme_check(const struct QcsiScheme *scheme, bool *c1, bool *c2);

// Model for a consistent scheme, starting from the distribution of the
// maximally mixed state. Fails with `QCSI_STATUS_CONTEXTUAL` otherwise.
enum QcsiStatus qcsi_hvm_new(const struct QcsiScheme *scheme, struct QcsiHvm **out);

void qcsi_hvm_free(struct QcsiHvm *hvm);

// Resets the distribution to that of the maximally mixed state.
enum QcsiStatus qcsi_hvm_reset(struct QcsiHvm *hvm);

// Model expectation of an inferable observable under the current
// distribution.
enum QcsiStatus qcsi_hvm_expectation(const struct QcsiHvm *hvm, const char *label, double *out);

// Conditions the distribution on outcome `outcome` (+1 or -1) of a
// measurable observable and reports the outcome probability. The handle is
// left unchanged on failure.
enum QcsiStatus qcsi_hvm_measure(struct QcsiHvm *hvm,
                                 const char *label,
                                 int8_t outcome,
                                 double *probability);

// Three-qubit GHZ state stabilized by XXX, -XZZ, -ZXZ, -ZZX.
enum QcsiStatus qcsi_state_ghz(struct QcsiState **out);

enum QcsiStatus qcsi_state_zeros(uintptr_t n, struct QcsiState **out);

enum QcsiStatus qcsi_state_maximally_mixed(uintptr_t n, struct QcsiState **out);

void qcsi_state_free(struct QcsiState *state);

// Applies a gate given as text, e.g. `"H 0"` or `"CZ 0 1"`.
enum QcsiStatus qcsi_state_apply_gate(struct QcsiState *state, const char *gate);

// Mixes the state with the maximally mixed state: `(1-eps) rho + eps I/d`.
enum QcsiStatus qcsi_state_depolarize(struct QcsiState *state, double eps);

enum QcsiStatus qcsi_state_expectation(const struct QcsiState *state,
                                       const char *label,
                                       double *out);

// Mermin witness on the (optionally depolarized) GHZ state: quantum value
// and the maximum over noncontextual assignments.
enum QcsiStatus qcsi_witness_ghz(double noise, double *quantum, double *hvm_bound);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCSI_LAB_H */
