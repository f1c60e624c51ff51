#ifndef CORRTENSOR_H
#define CORRTENSOR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CtStatus {
  CT_STATUS_OK = 0,
  CT_STATUS_NULL_POINTER = 1,
  CT_STATUS_INVALID_ARGUMENT = 2,
  CT_STATUS_PARSE = 3,
  CT_STATUS_DIMENSION_MISMATCH = 4,
  CT_STATUS_INVALID_STATE = 5,
  CT_STATUS_IO = 6,
  CT_STATUS_BUFFER_TOO_SMALL = 7,
  CT_STATUS_PANIC = 8,
} CtStatus;

typedef enum CtDetectedClass {
  CT_DETECTED_CLASS_NONE = 0,
  CT_DETECTED_CLASS_GME = 1,
  CT_DETECTED_CLASS_NOT_FULLY_SEPARABLE = 2,
  CT_DETECTED_CLASS_CHSH_VIOLATION = 3,
} CtDetectedClass;

// Opaque state handle.
typedef struct CtState CtState;

// Summary of one criterion evaluation.
typedef struct CtResult {
  // 1 if any test is violated, 0 otherwise.
  int32_t violated;
  // Largest `value - threshold` over the tests.
  double margin;
  enum CtDetectedClass detected_class;
  // Value and threshold of the test with the largest margin.
  double best_value;
  double best_threshold;
  size_t test_count;
} CtResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Build a state from a specification such as `ghz:d=2,n=3`.
//
// # Safety
// `spec` must be a NUL-terminated string and `out` a writable pointer.
enum CtStatus ct_state_from_spec(const char *spec, uint64_t seed, struct CtState **out);

// Build a state from a row-major `D x D` complex matrix given as separate
// real and imaginary arrays, `D = dims[0] * … * dims[n_parties - 1]`.
// `im` may be null for a real matrix.
//
// # Safety
// `re` (and `im` when non-null) must point to `D*D` doubles, `dims` to
// `n_parties` values, `out` must be writable.
enum CtStatus ct_state_from_matrix(const double *re,
                                   const double *im,
                                   const size_t *dims,
                                   size_t n_parties,
                                   struct CtState **out);

// New state `p I/D + (1 - p) rho`.
//
// # Safety
// `state` must be a live handle and `out` writable.
enum CtStatus ct_state_white_noise(const struct CtState *state, double p, struct CtState **out);

// Release a state. Null is ignored.
//
// # Safety
// `state` must come from this library and not be used afterwards.
void ct_state_free(struct CtState *state);

// Local dimensions of the parties. `n_parties` is always written; a
// buffer shorter than that fails with `BufferTooSmall`.
//
// # Safety
// `dims` must hold `capacity` values and `n_parties` must be writable.
enum CtStatus ct_state_dims(const struct CtState *state,
                            size_t *dims,
                            size_t capacity,
                            size_t *n_parties);

// Evaluate a criterion (`t1`, `t2`, `t3`, `t4`, `t4u`, `t4@1,2`, `chsh`).
//
// # Safety
// `state` must be live, `criterion` NUL-terminated and `out` writable.
enum CtStatus ct_detect(const struct CtState *state, const char *criterion, struct CtResult *out);

// Full criterion result as a JSON string; free it with [`ct_string_free`].
//
// # Safety
// As [`ct_detect`]; `out_json` must be writable.
enum CtStatus ct_detect_json(const struct CtState *state, const char *criterion, char **out_json);

// White-noise tolerance `p*` of a criterion; `detected` is set to 0 when
// the noiseless state is not detected (then `p* = 0`).
//
// # Safety
// `state` must be live, `criterion` NUL-terminated, `p` and `detected`
// writable.
enum CtStatus ct_white_noise_tolerance(const struct CtState *state,
                                       const char *criterion,
                                       double *p,
                                       int32_t *detected);

// Euclidean norm of the full correlation tensor.
//
// # Safety
// `state` must be live and `out` writable.
enum CtStatus ct_full_tensor_norm(const struct CtState *state, double *out);

// Singular values (descending) of the matricization with the given 1-based
// row parties. `len` always receives the spectrum length; with too small a
// buffer the call fails with `BufferTooSmall`.
//
// # Safety
// `rows` must hold `n_rows` values, `values` room for `capacity` doubles,
// `len` must be writable.
enum CtStatus ct_matricization_spectrum(const struct CtState *state,
                                        const size_t *rows,
                                        size_t n_rows,
                                        double *values,
                                        size_t capacity,
                                        size_t *len);

// Release a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void ct_string_free(char *s);

// Message for the most recent call on this thread if it failed, null if it
// succeeded. Valid until the next library call on the same thread.
const char *ct_last_error_message(void);

// Library version, a static string.
const char *ct_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CORRTENSOR_H */
