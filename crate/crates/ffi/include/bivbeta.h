#ifndef BIVBETA_H
#define BIVBETA_H

/* Generated by cbindgen from the bivbeta-ffi crate. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a call. Zero is success; everything else maps one
// condition class of the underlying library, plus the pointer and
// panic conditions that only exist at this boundary.
typedef enum {
  // The call succeeded and all outputs are valid.
  BIVBETA_STATUS_OK = 0,
  // A required pointer argument was null.
  BIVBETA_STATUS_NULL_POINTER = 1,
  // An argument value is outside the accepted range (for example a
  // negative model component, a zero marginal shape, or a
  // nonpositive tolerance).
  BIVBETA_STATUS_INVALID_ARGUMENT = 2,
  // A buffer length does not match the expected dimension.
  BIVBETA_STATUS_DIMENSION_MISMATCH = 3,
  // An input left the mathematical domain of the routine (for
  // example data outside the open unit interval).
  BIVBETA_STATUS_DOMAIN_ERROR = 4,
  // The operation needs a nonempty (or larger) sample.
  BIVBETA_STATUS_EMPTY_SAMPLE = 5,
  // The result is degenerate and carries no information (for example
  // the correlation of a constant sample).
  BIVBETA_STATUS_DEGENERATE = 6,
  // A moment or closed-form value does not exist at these parameters.
  BIVBETA_STATUS_POLE = 7,
  // An iterative routine exhausted its iteration budget.
  BIVBETA_STATUS_NON_CONVERGENCE = 8,
  // An intermediate quantity underflowed to zero.
  BIVBETA_STATUS_UNDERFLOW = 9,
  // A chain is too short for the requested batch-means split.
  BIVBETA_STATUS_CHAIN_TOO_SHORT = 10,
  // The requested run configuration is inconsistent.
  BIVBETA_STATUS_CONFIG_ERROR = 11,
  // A textual argument (such as a prior specification) failed to
  // parse.
  BIVBETA_STATUS_PARSE_ERROR = 12,
  // An input/output operation failed.
  BIVBETA_STATUS_IO_ERROR = 13,
  // An unexpected internal failure; if reproducible, please report
  // it.
  BIVBETA_STATUS_INTERNAL = 14,
} BivbetaStatus;

// Accepted draws and bookkeeping from an accept-reject run. Read it
// through the `bivbeta_abc_result_*` accessors and release it with
// `bivbeta_abc_result_free`.
typedef struct BivbetaAbcResult BivbetaAbcResult;

// A seeded random stream. One stream yields one reproducible sequence;
// streams with different indices under the same master seed are
// mutually independent.
typedef struct BivbetaRng BivbetaRng;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// A human-readable description of a status code, as a static
// NUL-terminated string that must not be freed.
const char *bivbeta_status_message(BivbetaStatus status);

// The library version, as a static NUL-terminated string that must not
// be freed.
const char *bivbeta_version(void);

// Create the random stream addressed by `(master_seed, stream_index)`.
// Never fails; release with `bivbeta_rng_free`.
BivbetaRng *bivbeta_rng_new(uint64_t master_seed, uint64_t stream_index);

// Release a stream created by `bivbeta_rng_new`. Null is a no-op.
//
// # Safety
//
// `rng` must be null or a pointer returned by `bivbeta_rng_new` that
// has not been freed already.
void bivbeta_rng_free(BivbetaRng *rng);

// Draw `n` pairs from the bivariate beta model selected by `dim` (5 or
// 8 components read from `params`), advancing `rng`. Writes the first
// coordinates to `out_z1` and the second to `out_z2`.
//
// # Safety
//
// `params` must point to `dim` doubles; `out_z1` and `out_z2` must
// each point to space for `n` doubles; `rng` must be a live stream
// from `bivbeta_rng_new`.
BivbetaStatus bivbeta_sample(const double *params,
                             size_t dim,
                             size_t n,
                             BivbetaRng *rng,
                             double *out_z1,
                             double *out_z2);

// Beta shape pairs of the two marginal laws of the model selected by
// `dim`: writes `(a1, b1)` of the first coordinate to `out_first` and
// `(a2, b2)` of the second to `out_second`.
//
// # Safety
//
// `params` must point to `dim` doubles; `out_first` and `out_second`
// must each point to space for 2 doubles.
BivbetaStatus bivbeta_marginals(const double *params,
                                size_t dim,
                                double *out_first,
                                double *out_second);

// Closed-form value of `E[(1-Z1)(1-Z2) / (Z1 Z2)]` for the
// five-parameter model; `alpha` holds its 5 components. Fails with
// `BIVBETA_STATUS_POLE` when a marginal shape sum is at most one and
// the moment does not exist.
//
// # Safety
//
// `alpha` must point to 5 doubles and `out` to one double.
BivbetaStatus bivbeta_cross_moment(const double *alpha, double *out);

// Monte Carlo estimate of the Pearson correlation of `(Z1, Z2)` under
// the model selected by `dim`, from `draws` fresh pairs drawn on
// `rng`.
//
// # Safety
//
// `params` must point to `dim` doubles, `out` to one double, and `rng`
// must be a live stream from `bivbeta_rng_new`.
BivbetaStatus bivbeta_mc_correlation(const double *params,
                                     size_t dim,
                                     size_t draws,
                                     BivbetaRng *rng,
                                     double *out);

// Maximum likelihood beta-binomial shapes for a histogram of counts
// over `{0, ..., trials}`: `counts[k]` is the number of observations
// equal to `k`, so `len` must be `trials + 1`. Writes the two shapes
// to `out_a` and `out_b`.
//
// # Safety
//
// `counts` must point to `len` unsigned 64-bit integers; `out_a` and
// `out_b` must each point to one double.
BivbetaStatus bivbeta_beta_binomial_mle(const uint64_t *counts,
                                        size_t len,
                                        uint32_t trials,
                                        double *out_a,
                                        double *out_b);

// Moment-closure estimate of the five-parameter model from `n` pairs
// whose coordinates sit strictly inside (0, 1). Writes the 5
// componentwise-nonnegative estimates to `out_alpha`; when
// `out_clipped` is not null, additionally writes 5 flags marking the
// components that were clipped to the zero floor.
//
// # Safety
//
// `z1` and `z2` must each point to `n` doubles; `out_alpha` must point
// to space for 5 doubles; `out_clipped` must be null or point to space
// for 5 booleans.
BivbetaStatus bivbeta_mmle5(const double *z1,
                            const double *z2,
                            size_t n,
                            double *out_alpha,
                            bool *out_clipped);

// Accept-reject likelihood-free posterior sampling for the model
// selected by `dim` (5 or 8).
//
// The observed data are `n` pairs in `z1`/`z2`. Parameter proposals
// are drawn from `prior` — a NUL-terminated specification applied
// independently to every component; it accepts registry names (`"G1"`,
// `"G2"`, `"U1"`, `"U2"`) and the literal forms `"gamma(shape,scale)"`
// and `"moduniform(mu,p)"`. A proposal is accepted when the L1
// distance between the summary vector of its simulated dataset (same
// size as the observed one) and the observed summary vector falls
// below `epsilon`. Sampling stops at `target` acceptances or after
// `proposal_cap` proposals, whichever comes first.
//
// Proposal `i` runs on stream `i` of `master_seed`, so the result is
// identical for any worker count. On success `*out_result` owns the
// accepted draws; release it with `bivbeta_abc_result_free`.
//
// # Safety
//
// `z1` and `z2` must each point to `n` doubles; `prior` must be a
// NUL-terminated string; `out_result` must point to one pointer slot.
BivbetaStatus bivbeta_abc_ar(const double *z1,
                             const double *z2,
                             size_t n,
                             size_t dim,
                             const char *prior,
                             double epsilon,
                             size_t target,
                             uint64_t proposal_cap,
                             uint64_t master_seed,
                             BivbetaAbcResult **out_result);

// Number of components per accepted draw; 0 when `result` is null.
//
// # Safety
//
// `result` must be null or a live pointer from `bivbeta_abc_ar`.
size_t bivbeta_abc_result_dim(const BivbetaAbcResult *result);

// Number of accepted draws; 0 when `result` is null.
//
// # Safety
//
// `result` must be null or a live pointer from `bivbeta_abc_ar`.
size_t bivbeta_abc_result_acceptances(const BivbetaAbcResult *result);

// Proposals consumed up to and including the final acceptance (or up
// to the cap); 0 when `result` is null.
//
// # Safety
//
// `result` must be null or a live pointer from `bivbeta_abc_ar`.
uint64_t bivbeta_abc_result_proposals_used(const BivbetaAbcResult *result);

// True when the proposal budget ran out before the acceptance target;
// false when `result` is null.
//
// # Safety
//
// `result` must be null or a live pointer from `bivbeta_abc_ar`.
bool bivbeta_abc_result_capped(const BivbetaAbcResult *result);

// Componentwise mean of the accepted draws, written to `out` of length
// `out_len` (which must equal the result dimension).
//
// # Safety
//
// `result` must be a live pointer from `bivbeta_abc_ar` and `out` must
// point to `out_len` doubles.
BivbetaStatus bivbeta_abc_result_posterior_mean(const BivbetaAbcResult *result,
                                                double *out,
                                                size_t out_len);

// Componentwise Monte Carlo standard error of the posterior mean,
// treating accepted draws as independent (which accept-reject output
// is), written to `out` of length `out_len`.
//
// # Safety
//
// `result` must be a live pointer from `bivbeta_abc_ar` and `out` must
// point to `out_len` doubles.
BivbetaStatus bivbeta_abc_result_component_mcse(const BivbetaAbcResult *result,
                                                double *out,
                                                size_t out_len);

// Copy accepted draw `index` (in acceptance order) to `out` of length
// `out_len`. Fails with `BIVBETA_STATUS_INVALID_ARGUMENT` when `index`
// is out of range.
//
// # Safety
//
// `result` must be a live pointer from `bivbeta_abc_ar` and `out` must
// point to `out_len` doubles.
BivbetaStatus bivbeta_abc_result_draw(const BivbetaAbcResult *result,
                                      size_t index,
                                      double *out,
                                      size_t out_len);

// The proposal index (stream address) behind accepted draw `index`,
// written to `out`. Fails with `BIVBETA_STATUS_INVALID_ARGUMENT` when
// `index` is out of range.
//
// # Safety
//
// `result` must be a live pointer from `bivbeta_abc_ar` and `out` must
// point to one unsigned 64-bit integer.
BivbetaStatus bivbeta_abc_result_proposal_index(const BivbetaAbcResult *result,
                                                size_t index,
                                                uint64_t *out);

// Release a result created by `bivbeta_abc_ar`. Null is a no-op.
//
// # Safety
//
// `result` must be null or a pointer returned by `bivbeta_abc_ar` that
// has not been freed already.
void bivbeta_abc_result_free(BivbetaAbcResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIVBETA_H */
