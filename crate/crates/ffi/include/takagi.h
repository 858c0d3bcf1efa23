#ifndef TAKAGI_H
#define TAKAGI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum {
  TAKAGI_STATUS_OK = 0,
  // A required pointer argument was null.
  TAKAGI_STATUS_NULL_POINTER = 1,
  // The problem data was rejected (bad nodes, malformed JSON, ...).
  TAKAGI_STATUS_INVALID_INPUT = 2,
  // The solver finished but its certificate did not pass.
  TAKAGI_STATUS_CERTIFICATE_FAILED = 3,
  // The numerics broke down.
  TAKAGI_STATUS_NUMERICAL_BREAKDOWN = 4,
  // A string argument was not valid UTF-8.
  TAKAGI_STATUS_INVALID_UTF8 = 5,
  // The output buffer is too small; the required length was written.
  TAKAGI_STATUS_BUFFER_TOO_SMALL = 6,
  // A Rust panic was caught at the boundary.
  TAKAGI_STATUS_PANIC = 7,
} TakagiStatus;

// A disk interpolation problem.
typedef struct TakagiProblem TakagiProblem;

// A solved disk problem together with its certificate.
typedef struct TakagiSolution TakagiSolution;

// Inertia `(positive, negative, zero)` of a Pick matrix.
typedef struct {
  size_t positive;
  size_t negative;
  size_t zero;
} TakagiInertia;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null if it succeeded.
// The pointer stays valid until the next call into the library on this thread.
const char *takagi_last_error_message(void);

// Default seed used when the caller has no preference.
uint64_t takagi_default_seed(void);

// Builds a problem from `n` nodes and `n` values, each an interleaved array
// of `2n` doubles `(re, im)`.
//
// # Safety
// `nodes` and `values` must point to `2n` readable doubles; `out` must be writable.
TakagiStatus takagi_problem_new(const double *nodes,
                                const double *values,
                                size_t n,
                                TakagiProblem **out);

// # Safety
// `problem` must be null or a handle from [`takagi_problem_new`] not yet freed.
void takagi_problem_free(TakagiProblem *problem);

// Number of interpolation nodes, or 0 for a null handle.
//
// # Safety
// `problem` must be null or a live handle.
size_t takagi_problem_len(const TakagiProblem *problem);

// Inertia of the Pick matrix with the default threshold.
//
// # Safety
// `problem` must be a live handle and `out` writable.
TakagiStatus takagi_problem_inertia(const TakagiProblem *problem, TakagiInertia *out);

// Solves `problem`. A solution whose certificate fails is still returned
// through `out`, together with [`TakagiStatus::CertificateFailed`].
//
// # Safety
// `problem` must be a live handle and `out` writable.
TakagiStatus takagi_solve(const TakagiProblem *problem, uint64_t seed, TakagiSolution **out);

// # Safety
// `solution` must be null or a live handle.
void takagi_solution_free(TakagiSolution *solution);

// Whether every certificate check passed. False for a null handle.
//
// # Safety
// `solution` must be null or a live handle.
bool takagi_solution_passed(const TakagiSolution *solution);

// Degrees of the zero and pole Blaschke factors of the solution.
//
// # Safety
// `solution` must be a live handle; `zeros` and `poles` writable.
TakagiStatus takagi_solution_degrees(const TakagiSolution *solution, size_t *zeros, size_t *poles);

// Evaluates the solution at `(re, im)`, writing the result to `out_re`, `out_im`.
//
// # Safety
// `solution` must be a live handle; `out_re` and `out_im` writable.
TakagiStatus takagi_solution_eval(const TakagiSolution *solution,
                                  double re,
                                  double im,
                                  double *out_re,
                                  double *out_im);

// Copies the numerator coefficients (ascending powers, interleaved `(re, im)`)
// into `out`, which holds `capacity` complex numbers. `len` receives the
// number of coefficients even when the buffer is too small.
//
// # Safety
// `solution` must be a live handle, `out` must hold `2 * capacity` doubles, `len` writable.
TakagiStatus takagi_solution_numerator(const TakagiSolution *solution,
                                       double *out,
                                       size_t capacity,
                                       size_t *len);

// Same as [`takagi_solution_numerator`] for the denominator.
//
// # Safety
// See [`takagi_solution_numerator`].
TakagiStatus takagi_solution_denominator(const TakagiSolution *solution,
                                         double *out,
                                         size_t capacity,
                                         size_t *len);

// Solves a JSON problem document (disk or bidisk) and writes the JSON result
// document to `out`. Free the string with [`takagi_string_free`]. As with
// [`takagi_solve`], a failed certificate still produces a document.
//
// # Safety
// `problem_json` must be a NUL-terminated string and `out` writable.
TakagiStatus takagi_solve_json(const char *problem_json, uint64_t seed, char **out);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void takagi_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAKAGI_H */
