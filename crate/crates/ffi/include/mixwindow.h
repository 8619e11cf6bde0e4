/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef MIXWINDOW_H
#define MIXWINDOW_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Sample count standing for `+∞`.
#define MW_INFINITE UINT64_MAX

// Status codes returned by every fallible function.
typedef enum MwStatus {
  MW_STATUS_OK = 0,
  MW_STATUS_NULL_POINTER = 1,
  MW_STATUS_INVALID_ARGUMENT = 2,
  MW_STATUS_PARSE = 3,
  MW_STATUS_NOT_REVERSIBLE = 4,
  MW_STATUS_NOT_IRREDUCIBLE = 5,
  MW_STATUS_INFEASIBLE = 6,
  MW_STATUS_BUDGET_EXCEEDED = 7,
  MW_STATUS_BUFFER_TOO_SMALL = 8,
  MW_STATUS_INTERNAL = 9,
} MwStatus;

// Opaque handle to a reversible chain and its spectral decomposition.
typedef struct MwChain MwChain;

// Monte Carlo error estimate of the likelihood-ratio test.
typedef struct MwErrorEstimate {
  double err_mu;
  double err_mu_prime;
  double err_max;
  uint64_t trials;
  double ci_halfwidth;
} MwErrorEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *mw_last_error_message(void);

// Library version as a NUL-terminated string.
const char *mw_version(void);

// Builds a chain from JSON: a zoo spec such as `{"type":"cycle","d":8}`,
// `{"type":"explicit","matrix":[[...]]}`, or a bare array of rows.
enum MwStatus mw_chain_from_json(const char *json, struct MwChain **out);

// Builds a chain from a row-major `d × d` transition matrix.
enum MwStatus mw_chain_from_matrix(const double *data, size_t d, struct MwChain **out);

// Releases a chain. Null is ignored.
void mw_chain_free(struct MwChain *chain);

enum MwStatus mw_chain_dim(const struct MwChain *chain, size_t *out);

// Writes the stationary distribution into `out[0..d]`.
enum MwStatus mw_chain_stationary(const struct MwChain *chain, double *out, size_t len);

// Writes the eigenvalues in descending order into `out[0..d]`.
enum MwStatus mw_chain_eigenvalues(const struct MwChain *chain, double *out, size_t len);

// `Δ(t) = ‖μPᵗ − μ′Pᵗ‖²_π` for distributions of length `d`.
enum MwStatus mw_decay_distance_sq(const struct MwChain *chain,
                                   const double *mu,
                                   const double *mu_prime,
                                   size_t d,
                                   uint64_t t,
                                   double *out);

// Samples after which the likelihood-ratio test errs with probability below
// `delta`, for a pairwise `epsilon`-bounded triple. `UINT64_MAX` means infinite.
enum MwStatus mw_sample_upper_bound(const struct MwChain *chain,
                                    const double *mu,
                                    const double *mu_prime,
                                    size_t d,
                                    uint64_t t,
                                    double epsilon,
                                    double delta,
                                    uint64_t *out);

// Samples below which every test errs with probability at least `½ − delta`.
// `UINT64_MAX` means infinite.
enum MwStatus mw_sample_lower_bound(const struct MwChain *chain,
                                    const double *mu,
                                    const double *mu_prime,
                                    size_t d,
                                    uint64_t t,
                                    double epsilon,
                                    double delta,
                                    uint64_t *out);

// Monte Carlo error of the likelihood-ratio test on `n` draws after `t` steps,
// `trials` runs per hypothesis, deterministic in `seed`.
enum MwStatus mw_estimate_error(const struct MwChain *chain,
                                const double *mu,
                                const double *mu_prime,
                                size_t d,
                                uint64_t t,
                                uint64_t n,
                                uint64_t trials,
                                uint64_t seed,
                                struct MwErrorEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MIXWINDOW_H */
