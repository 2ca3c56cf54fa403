//! C bindings for the `bivbeta` crate.
//!
//! The surface follows one set of conventions throughout:
//!
//! - Handles ([`BivbetaRng`], [`BivbetaAbcResult`]) are opaque: the
//!   library allocates them, the caller releases them with the matching
//!   `_free` function. Freeing null is a no-op; freeing twice or using a
//!   freed handle is undefined behavior.
//! - Fallible functions return a [`BivbetaStatus`] and write results
//!   through caller-owned output pointers. When the status is not
//!   `BIVBETA_STATUS_OK` the contents of the output buffers are
//!   unspecified.
//! - Buffers are flat arrays with explicit lengths; no function
//!   allocates memory the caller must free except the handle
//!   constructors.
//! - Panics never unwind across the boundary: they are caught and
//!   reported as `BIVBETA_STATUS_INTERNAL`.
//!
//! A handle must not be used from two threads at once. The accept-reject
//! routine parallelizes internally and its output depends only on the
//! seed, never on the worker count.
//!
//! The matching C header lives at `include/bivbeta.h` and is regenerated
//! by the build script on every build.

use std::ffi::CStr;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use bivbeta::abc::{abc_ar, iid_mcse, posterior_mean, AbcProblem};
use bivbeta::error::Error;
use bivbeta::estimation::{beta_binomial_mle, mmle5};
use bivbeta::model::{theoretical_cross_moment, Bb5Params, BivariateDataset, ModelParams};
use bivbeta::numerics::{RngStream, StreamFamily};
use bivbeta::priors::{Prior, PriorProduct};
use bivbeta::summaries::{l1_distance, summaries5, summaries8, SummaryVector};

/// Outcome of a call. Zero is success; everything else maps one
/// condition class of the underlying library, plus the pointer and
/// panic conditions that only exist at this boundary.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BivbetaStatus {
    /// The call succeeded and all outputs are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument value is outside the accepted range (for example a
    /// negative model component, a zero marginal shape, or a
    /// nonpositive tolerance).
    InvalidArgument = 2,
    /// A buffer length does not match the expected dimension.
    DimensionMismatch = 3,
    /// An input left the mathematical domain of the routine (for
    /// example data outside the open unit interval).
    DomainError = 4,
    /// The operation needs a nonempty (or larger) sample.
    EmptySample = 5,
    /// The result is degenerate and carries no information (for example
    /// the correlation of a constant sample).
    Degenerate = 6,
    /// A moment or closed-form value does not exist at these parameters.
    Pole = 7,
    /// An iterative routine exhausted its iteration budget.
    NonConvergence = 8,
    /// An intermediate quantity underflowed to zero.
    Underflow = 9,
    /// A chain is too short for the requested batch-means split.
    ChainTooShort = 10,
    /// The requested run configuration is inconsistent.
    ConfigError = 11,
    /// A textual argument (such as a prior specification) failed to
    /// parse.
    ParseError = 12,
    /// An input/output operation failed.
    IoError = 13,
    /// An unexpected internal failure; if reproducible, please report
    /// it.
    Internal = 14,
}

fn status_of(err: &Error) -> BivbetaStatus {
    match err {
        Error::Domain { .. } => BivbetaStatus::DomainError,
        Error::InvalidParameter { .. } => BivbetaStatus::InvalidArgument,
        Error::DimensionMismatch { .. } => BivbetaStatus::DimensionMismatch,
        Error::EmptySample { .. } => BivbetaStatus::EmptySample,
        Error::Degenerate { .. } => BivbetaStatus::Degenerate,
        Error::Pole { .. } => BivbetaStatus::Pole,
        Error::NonConvergence { .. } => BivbetaStatus::NonConvergence,
        Error::Underflow { .. } => BivbetaStatus::Underflow,
        Error::ChainTooShort { .. } => BivbetaStatus::ChainTooShort,
        Error::Config(_) => BivbetaStatus::ConfigError,
        Error::Parse(_) => BivbetaStatus::ParseError,
        Error::Io(_) => BivbetaStatus::IoError,
        _ => BivbetaStatus::Internal,
    }
}

/// Run `f` with panics converted to `Internal` so nothing unwinds into
/// the C caller.
fn guard<F: FnOnce() -> BivbetaStatus>(f: F) -> BivbetaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => BivbetaStatus::Internal,
    }
}

/// A seeded random stream. One stream yields one reproducible sequence;
/// streams with different indices under the same master seed are
/// mutually independent.
pub struct BivbetaRng {
    stream: RngStream,
}

/// Accepted draws and bookkeeping from an accept-reject run. Read it
/// through the `bivbeta_abc_result_*` accessors and release it with
/// `bivbeta_abc_result_free`.
pub struct BivbetaAbcResult {
    dim: usize,
    accepted: Vec<Vec<f64>>,
    accepted_indices: Vec<u64>,
    proposals_used: u64,
    capped: bool,
}

/// A human-readable description of a status code, as a static
/// NUL-terminated string that must not be freed.
#[no_mangle]
pub extern "C" fn bivbeta_status_message(status: BivbetaStatus) -> *const c_char {
    let message: &CStr = match status {
        BivbetaStatus::Ok => c"ok",
        BivbetaStatus::NullPointer => c"a required pointer argument was null",
        BivbetaStatus::InvalidArgument => c"an argument value is outside the accepted range",
        BivbetaStatus::DimensionMismatch => {
            c"a buffer length does not match the expected dimension"
        }
        BivbetaStatus::DomainError => c"an input left the mathematical domain of the routine",
        BivbetaStatus::EmptySample => c"the operation needs a nonempty or larger sample",
        BivbetaStatus::Degenerate => c"the result is degenerate and carries no information",
        BivbetaStatus::Pole => c"the requested value does not exist at these parameters",
        BivbetaStatus::NonConvergence => c"an iterative routine exhausted its iteration budget",
        BivbetaStatus::Underflow => c"an intermediate quantity underflowed to zero",
        BivbetaStatus::ChainTooShort => c"the chain is too short for the requested batch split",
        BivbetaStatus::ConfigError => c"the requested run configuration is inconsistent",
        BivbetaStatus::ParseError => c"a textual argument failed to parse",
        BivbetaStatus::IoError => c"an input/output operation failed",
        BivbetaStatus::Internal => c"unexpected internal failure",
    };
    message.as_ptr()
}

/// The library version, as a static NUL-terminated string that must not
/// be freed.
#[no_mangle]
pub extern "C" fn bivbeta_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Create the random stream addressed by `(master_seed, stream_index)`.
/// Never fails; release with `bivbeta_rng_free`.
#[no_mangle]
pub extern "C" fn bivbeta_rng_new(master_seed: u64, stream_index: u64) -> *mut BivbetaRng {
    Box::into_raw(Box::new(BivbetaRng { stream: RngStream::substream(master_seed, stream_index) }))
}

/// Release a stream created by `bivbeta_rng_new`. Null is a no-op.
///
/// # Safety
///
/// `rng` must be null or a pointer returned by `bivbeta_rng_new` that
/// has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_rng_free(rng: *mut BivbetaRng) {
    if !rng.is_null() {
        drop(Box::from_raw(rng));
    }
}

/// Draw `n` pairs from the bivariate beta model selected by `dim` (5 or
/// 8 components read from `params`), advancing `rng`. Writes the first
/// coordinates to `out_z1` and the second to `out_z2`.
///
/// # Safety
///
/// `params` must point to `dim` doubles; `out_z1` and `out_z2` must
/// each point to space for `n` doubles; `rng` must be a live stream
/// from `bivbeta_rng_new`.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_sample(
    params: *const f64,
    dim: usize,
    n: usize,
    rng: *mut BivbetaRng,
    out_z1: *mut f64,
    out_z2: *mut f64,
) -> BivbetaStatus {
    if params.is_null() || rng.is_null() || out_z1.is_null() || out_z2.is_null() {
        return BivbetaStatus::NullPointer;
    }
    let params = slice::from_raw_parts(params, dim);
    let out_z1 = slice::from_raw_parts_mut(out_z1, n);
    let out_z2 = slice::from_raw_parts_mut(out_z2, n);
    let stream = &mut (*rng).stream;
    guard(|| {
        let model = match ModelParams::from_slice(params) {
            Ok(m) => m,
            Err(e) => return status_of(&e),
        };
        for i in 0..n {
            match model.as_model().sample(stream) {
                Ok((z1, z2)) => {
                    out_z1[i] = z1;
                    out_z2[i] = z2;
                }
                Err(e) => return status_of(&e),
            }
        }
        BivbetaStatus::Ok
    })
}

/// Beta shape pairs of the two marginal laws of the model selected by
/// `dim`: writes `(a1, b1)` of the first coordinate to `out_first` and
/// `(a2, b2)` of the second to `out_second`.
///
/// # Safety
///
/// `params` must point to `dim` doubles; `out_first` and `out_second`
/// must each point to space for 2 doubles.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_marginals(
    params: *const f64,
    dim: usize,
    out_first: *mut f64,
    out_second: *mut f64,
) -> BivbetaStatus {
    if params.is_null() || out_first.is_null() || out_second.is_null() {
        return BivbetaStatus::NullPointer;
    }
    let params = slice::from_raw_parts(params, dim);
    let out_first = slice::from_raw_parts_mut(out_first, 2);
    let out_second = slice::from_raw_parts_mut(out_second, 2);
    guard(|| {
        let model = match ModelParams::from_slice(params) {
            Ok(m) => m,
            Err(e) => return status_of(&e),
        };
        let ((a1, b1), (a2, b2)) = model.as_model().marginals();
        out_first[0] = a1;
        out_first[1] = b1;
        out_second[0] = a2;
        out_second[1] = b2;
        BivbetaStatus::Ok
    })
}

/// Closed-form value of `E[(1-Z1)(1-Z2) / (Z1 Z2)]` for the
/// five-parameter model; `alpha` holds its 5 components. Fails with
/// `BIVBETA_STATUS_POLE` when a marginal shape sum is at most one and
/// the moment does not exist.
///
/// # Safety
///
/// `alpha` must point to 5 doubles and `out` to one double.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_cross_moment(alpha: *const f64, out: *mut f64) -> BivbetaStatus {
    if alpha.is_null() || out.is_null() {
        return BivbetaStatus::NullPointer;
    }
    let alpha = slice::from_raw_parts(alpha, 5);
    let out = &mut *out;
    guard(|| {
        let mut a = [0.0; 5];
        a.copy_from_slice(alpha);
        let params = match Bb5Params::new(a) {
            Ok(p) => p,
            Err(e) => return status_of(&e),
        };
        match theoretical_cross_moment(&params) {
            Ok(value) => {
                *out = value;
                BivbetaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Monte Carlo estimate of the Pearson correlation of `(Z1, Z2)` under
/// the model selected by `dim`, from `draws` fresh pairs drawn on
/// `rng`.
///
/// # Safety
///
/// `params` must point to `dim` doubles, `out` to one double, and `rng`
/// must be a live stream from `bivbeta_rng_new`.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_mc_correlation(
    params: *const f64,
    dim: usize,
    draws: usize,
    rng: *mut BivbetaRng,
    out: *mut f64,
) -> BivbetaStatus {
    if params.is_null() || rng.is_null() || out.is_null() {
        return BivbetaStatus::NullPointer;
    }
    let params = slice::from_raw_parts(params, dim);
    let stream = &mut (*rng).stream;
    let out = &mut *out;
    guard(|| {
        let model = match ModelParams::from_slice(params) {
            Ok(m) => m,
            Err(e) => return status_of(&e),
        };
        match bivbeta::model::mc_correlation(model.as_model(), draws, stream) {
            Ok(r) => {
                *out = r;
                BivbetaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Maximum likelihood beta-binomial shapes for a histogram of counts
/// over `{0, ..., trials}`: `counts[k]` is the number of observations
/// equal to `k`, so `len` must be `trials + 1`. Writes the two shapes
/// to `out_a` and `out_b`.
///
/// # Safety
///
/// `counts` must point to `len` unsigned 64-bit integers; `out_a` and
/// `out_b` must each point to one double.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_beta_binomial_mle(
    counts: *const u64,
    len: usize,
    trials: u32,
    out_a: *mut f64,
    out_b: *mut f64,
) -> BivbetaStatus {
    if counts.is_null() || out_a.is_null() || out_b.is_null() {
        return BivbetaStatus::NullPointer;
    }
    let counts = slice::from_raw_parts(counts, len);
    let out_a = &mut *out_a;
    let out_b = &mut *out_b;
    guard(|| match beta_binomial_mle(counts, trials) {
        Ok((a, b)) => {
            *out_a = a;
            *out_b = b;
            BivbetaStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

fn dataset_from_columns(z1: &[f64], z2: &[f64]) -> Result<BivariateDataset, Error> {
    let pairs: Vec<(f64, f64)> = z1.iter().copied().zip(z2.iter().copied()).collect();
    BivariateDataset::new(pairs)
}

/// Moment-closure estimate of the five-parameter model from `n` pairs
/// whose coordinates sit strictly inside (0, 1). Writes the 5
/// componentwise-nonnegative estimates to `out_alpha`; when
/// `out_clipped` is not null, additionally writes 5 flags marking the
/// components that were clipped to the zero floor.
///
/// # Safety
///
/// `z1` and `z2` must each point to `n` doubles; `out_alpha` must point
/// to space for 5 doubles; `out_clipped` must be null or point to space
/// for 5 booleans.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_mmle5(
    z1: *const f64,
    z2: *const f64,
    n: usize,
    out_alpha: *mut f64,
    out_clipped: *mut bool,
) -> BivbetaStatus {
    if z1.is_null() || z2.is_null() || out_alpha.is_null() {
        return BivbetaStatus::NullPointer;
    }
    let z1 = slice::from_raw_parts(z1, n);
    let z2 = slice::from_raw_parts(z2, n);
    let out_alpha = slice::from_raw_parts_mut(out_alpha, 5);
    let out_clipped =
        if out_clipped.is_null() { None } else { Some(slice::from_raw_parts_mut(out_clipped, 5)) };
    guard(|| {
        let data = match dataset_from_columns(z1, z2) {
            Ok(d) => d,
            Err(e) => return status_of(&e),
        };
        match mmle5(&data) {
            Ok(fit) => {
                out_alpha.copy_from_slice(&fit.alpha_hat);
                if let Some(flags) = out_clipped {
                    flags.copy_from_slice(&fit.clipped);
                }
                BivbetaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Accept-reject likelihood-free posterior sampling for the model
/// selected by `dim` (5 or 8).
///
/// The observed data are `n` pairs in `z1`/`z2`. Parameter proposals
/// are drawn from `prior` — a NUL-terminated specification applied
/// independently to every component; it accepts registry names (`"G1"`,
/// `"G2"`, `"U1"`, `"U2"`) and the literal forms `"gamma(shape,scale)"`
/// and `"moduniform(mu,p)"`. A proposal is accepted when the L1
/// distance between the summary vector of its simulated dataset (same
/// size as the observed one) and the observed summary vector falls
/// below `epsilon`. Sampling stops at `target` acceptances or after
/// `proposal_cap` proposals, whichever comes first.
///
/// Proposal `i` runs on stream `i` of `master_seed`, so the result is
/// identical for any worker count. On success `*out_result` owns the
/// accepted draws; release it with `bivbeta_abc_result_free`.
///
/// # Safety
///
/// `z1` and `z2` must each point to `n` doubles; `prior` must be a
/// NUL-terminated string; `out_result` must point to one pointer slot.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_abc_ar(
    z1: *const f64,
    z2: *const f64,
    n: usize,
    dim: usize,
    prior: *const c_char,
    epsilon: f64,
    target: usize,
    proposal_cap: u64,
    master_seed: u64,
    out_result: *mut *mut BivbetaAbcResult,
) -> BivbetaStatus {
    if z1.is_null() || z2.is_null() || prior.is_null() || out_result.is_null() {
        return BivbetaStatus::NullPointer;
    }
    let z1 = slice::from_raw_parts(z1, n);
    let z2 = slice::from_raw_parts(z2, n);
    let prior = CStr::from_ptr(prior);
    let out_result = &mut *out_result;
    guard(|| {
        if dim != 5 && dim != 8 {
            return BivbetaStatus::DimensionMismatch;
        }
        let prior = match prior.to_str() {
            Ok(s) => s,
            Err(_) => return BivbetaStatus::ParseError,
        };
        match run_abc_ar(z1, z2, dim, prior, epsilon, target, proposal_cap, master_seed) {
            Ok(result) => {
                *out_result = Box::into_raw(Box::new(result));
                BivbetaStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

fn summarize_for(dim: usize, data: &BivariateDataset) -> Result<SummaryVector, Error> {
    if dim == 8 {
        summaries8(data)
    } else {
        summaries5(data)
    }
}

#[allow(clippy::too_many_arguments)]
fn run_abc_ar(
    z1: &[f64],
    z2: &[f64],
    dim: usize,
    prior: &str,
    epsilon: f64,
    target: usize,
    proposal_cap: u64,
    master_seed: u64,
) -> Result<BivbetaAbcResult, Error> {
    let data = dataset_from_columns(z1, z2)?;
    let observed = summarize_for(dim, &data)?;
    let prior = PriorProduct::iid(prior.parse::<Prior>()?, dim)?;
    let n = data.len();
    let problem = AbcProblem::new(
        &prior,
        move |theta: &[f64], rng: &mut RngStream| {
            ModelParams::from_slice(theta)?.as_model().sample_dataset(n, rng)
        },
        move |d: &BivariateDataset| summarize_for(dim, d),
        |a: &SummaryVector, b: &SummaryVector| l1_distance(a, b),
        observed,
        epsilon,
    )?;
    let run = abc_ar(&problem, target, proposal_cap, StreamFamily::new(master_seed, 0))?;
    Ok(BivbetaAbcResult {
        dim,
        accepted: run.accepted,
        accepted_indices: run.accepted_indices,
        proposals_used: run.proposals_used,
        capped: run.capped,
    })
}

/// Number of components per accepted draw; 0 when `result` is null.
///
/// # Safety
///
/// `result` must be null or a live pointer from `bivbeta_abc_ar`.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_abc_result_dim(result: *const BivbetaAbcResult) -> usize {
    if result.is_null() {
        return 0;
    }
    (*result).dim
}

/// Number of accepted draws; 0 when `result` is null.
///
/// # Safety
///
/// `result` must be null or a live pointer from `bivbeta_abc_ar`.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_abc_result_acceptances(result: *const BivbetaAbcResult) -> usize {
    if result.is_null() {
        return 0;
    }
    let result = &*result;
    result.accepted.len()
}

/// Proposals consumed up to and including the final acceptance (or up
/// to the cap); 0 when `result` is null.
///
/// # Safety
///
/// `result` must be null or a live pointer from `bivbeta_abc_ar`.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_abc_result_proposals_used(result: *const BivbetaAbcResult) -> u64 {
    if result.is_null() {
        return 0;
    }
    (*result).proposals_used
}

/// True when the proposal budget ran out before the acceptance target;
/// false when `result` is null.
///
/// # Safety
///
/// `result` must be null or a live pointer from `bivbeta_abc_ar`.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_abc_result_capped(result: *const BivbetaAbcResult) -> bool {
    if result.is_null() {
        return false;
    }
    (*result).capped
}

unsafe fn with_result_buffer<F>(
    result: *const BivbetaAbcResult,
    out: *mut f64,
    out_len: usize,
    fill: F,
) -> BivbetaStatus
where
    F: FnOnce(&BivbetaAbcResult, &mut [f64]) -> BivbetaStatus,
{
    if result.is_null() || out.is_null() {
        return BivbetaStatus::NullPointer;
    }
    let result = &*result;
    if out_len != result.dim {
        return BivbetaStatus::DimensionMismatch;
    }
    let out = slice::from_raw_parts_mut(out, out_len);
    guard(|| fill(result, out))
}

/// Componentwise mean of the accepted draws, written to `out` of length
/// `out_len` (which must equal the result dimension).
///
/// # Safety
///
/// `result` must be a live pointer from `bivbeta_abc_ar` and `out` must
/// point to `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_abc_result_posterior_mean(
    result: *const BivbetaAbcResult,
    out: *mut f64,
    out_len: usize,
) -> BivbetaStatus {
    with_result_buffer(result, out, out_len, |r, out| match posterior_mean(&r.accepted) {
        Ok(mean) => {
            out.copy_from_slice(&mean);
            BivbetaStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Componentwise Monte Carlo standard error of the posterior mean,
/// treating accepted draws as independent (which accept-reject output
/// is), written to `out` of length `out_len`.
///
/// # Safety
///
/// `result` must be a live pointer from `bivbeta_abc_ar` and `out` must
/// point to `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_abc_result_component_mcse(
    result: *const BivbetaAbcResult,
    out: *mut f64,
    out_len: usize,
) -> BivbetaStatus {
    with_result_buffer(result, out, out_len, |r, out| {
        for (j, slot) in out.iter_mut().enumerate() {
            let component: Vec<f64> = r.accepted.iter().map(|v| v[j]).collect();
            match iid_mcse(&component) {
                Ok(se) => *slot = se,
                Err(e) => return status_of(&e),
            }
        }
        BivbetaStatus::Ok
    })
}

/// Copy accepted draw `index` (in acceptance order) to `out` of length
/// `out_len`. Fails with `BIVBETA_STATUS_INVALID_ARGUMENT` when `index`
/// is out of range.
///
/// # Safety
///
/// `result` must be a live pointer from `bivbeta_abc_ar` and `out` must
/// point to `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_abc_result_draw(
    result: *const BivbetaAbcResult,
    index: usize,
    out: *mut f64,
    out_len: usize,
) -> BivbetaStatus {
    with_result_buffer(result, out, out_len, |r, out| match r.accepted.get(index) {
        Some(draw) => {
            out.copy_from_slice(draw);
            BivbetaStatus::Ok
        }
        None => BivbetaStatus::InvalidArgument,
    })
}

/// The proposal index (stream address) behind accepted draw `index`,
/// written to `out`. Fails with `BIVBETA_STATUS_INVALID_ARGUMENT` when
/// `index` is out of range.
///
/// # Safety
///
/// `result` must be a live pointer from `bivbeta_abc_ar` and `out` must
/// point to one unsigned 64-bit integer.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_abc_result_proposal_index(
    result: *const BivbetaAbcResult,
    index: usize,
    out: *mut u64,
) -> BivbetaStatus {
    if result.is_null() || out.is_null() {
        return BivbetaStatus::NullPointer;
    }
    let result = &*result;
    match result.accepted_indices.get(index) {
        Some(&value) => {
            *out = value;
            BivbetaStatus::Ok
        }
        None => BivbetaStatus::InvalidArgument,
    }
}

/// Release a result created by `bivbeta_abc_ar`. Null is a no-op.
///
/// # Safety
///
/// `result` must be null or a pointer returned by `bivbeta_abc_ar` that
/// has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn bivbeta_abc_result_free(result: *mut BivbetaAbcResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
