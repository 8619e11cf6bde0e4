//! C ABI over the `mixwindow` crate.
//!
//! Chains live behind the opaque [`MwChain`] handle, created by
//! [`mw_chain_from_json`] or [`mw_chain_from_matrix`] and released with
//! [`mw_chain_free`]. Every fallible call returns an [`MwStatus`]; on failure
//! [`mw_last_error_message`] describes the problem for the calling thread.
//! Infinite sample counts are reported as `UINT64_MAX`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mixwindow::complexity::{self, Count};
use mixwindow::montecarlo::estimate_error;
use mixwindow::{cli, geometry, Distribution, Error, SpectralDecomposition, TestingInstance, TransitionMatrix};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    NotReversible = 4,
    NotIrreducible = 5,
    Infeasible = 6,
    BudgetExceeded = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

impl From<&Error> for MwStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse(_) => MwStatus::Parse,
            Error::NotReversible { .. } => MwStatus::NotReversible,
            Error::NotIrreducible => MwStatus::NotIrreducible,
            Error::Infeasible(_) | Error::Undefined(_) => MwStatus::Infeasible,
            Error::BudgetExceeded { .. } => MwStatus::BudgetExceeded,
            Error::EigensolverFailure { .. } => MwStatus::Internal,
            _ => MwStatus::InvalidArgument,
        }
    }
}

/// Opaque handle to a reversible chain and its spectral decomposition.
pub struct MwChain {
    chain: TransitionMatrix,
    spectrum: SpectralDecomposition,
}

/// Monte Carlo error estimate of the likelihood-ratio test.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MwErrorEstimate {
    pub err_mu: f64,
    pub err_mu_prime: f64,
    pub err_max: f64,
    pub trials: u64,
    pub ci_halfwidth: f64,
}

/// Sample count standing for `+∞`.
pub const MW_INFINITE: u64 = u64::MAX;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: MwStatus, msg: &str) -> MwStatus {
    set_last_error(msg);
    status
}

/// Runs `f`, turning library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (MwStatus, String)>) -> MwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            MwStatus::Ok
        }
        Ok(Err((status, msg))) => fail(status, &msg),
        Err(_) => fail(MwStatus::Internal, "internal panic"),
    }
}

fn lib(e: Error) -> (MwStatus, String) {
    (MwStatus::from(&e), e.to_string())
}

fn null(what: &str) -> (MwStatus, String) {
    (MwStatus::NullPointer, format!("{what} is null"))
}

unsafe fn chain_ref<'a>(chain: *const MwChain) -> Result<&'a MwChain, (MwStatus, String)> {
    chain.as_ref().ok_or_else(|| null("chain"))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], (MwStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn distribution(p: *const f64, len: usize, what: &str) -> Result<Distribution, (MwStatus, String)> {
    Distribution::new(slice(p, len, what)?.to_vec()).map_err(lib)
}

fn build(chain: TransitionMatrix) -> Result<Box<MwChain>, (MwStatus, String)> {
    let spectrum = mixwindow::spectral_decomposition(&chain).map_err(lib)?;
    Ok(Box::new(MwChain { chain, spectrum }))
}

fn count_to_u64(c: Count) -> u64 {
    c.finite().unwrap_or(MW_INFINITE)
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a NUL-terminated string.
#[no_mangle]
pub extern "C" fn mw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a chain from JSON: a zoo spec such as `{"type":"cycle","d":8}`,
/// `{"type":"explicit","matrix":[[...]]}`, or a bare array of rows.
#[no_mangle]
pub unsafe extern "C" fn mw_chain_from_json(json: *const c_char, out: *mut *mut MwChain) -> MwStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = CStr::from_ptr(json).to_str().map_err(|_| (MwStatus::Parse, "json is not UTF-8".to_string()))?;
        let chain = cli::parse_chain_json(text).map_err(lib)?;
        *out = Box::into_raw(build(chain)?);
        Ok(())
    })
}

/// Builds a chain from a row-major `d × d` transition matrix.
#[no_mangle]
pub unsafe extern "C" fn mw_chain_from_matrix(data: *const f64, d: usize, out: *mut *mut MwChain) -> MwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let len = d.checked_mul(d).ok_or((MwStatus::InvalidArgument, "dimension overflows".to_string()))?;
        let entries = slice(data, len, "data")?;
        let rows: Vec<Vec<f64>> = entries.chunks(d.max(1)).map(<[f64]>::to_vec).collect();
        let chain = TransitionMatrix::from_rows(&rows).map_err(lib)?;
        *out = Box::into_raw(build(chain)?);
        Ok(())
    })
}

/// Releases a chain. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mw_chain_free(chain: *mut MwChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

#[no_mangle]
pub unsafe extern "C" fn mw_chain_dim(chain: *const MwChain, out: *mut usize) -> MwStatus {
    guard(|| {
        let c = chain_ref(chain)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = c.chain.dim();
        Ok(())
    })
}

unsafe fn copy_out(src: &[f64], out: *mut f64, len: usize) -> Result<(), (MwStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    if len < src.len() {
        return Err((MwStatus::BufferTooSmall, format!("buffer holds {len} values, {} needed", src.len())));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

/// Writes the stationary distribution into `out[0..d]`.
#[no_mangle]
pub unsafe extern "C" fn mw_chain_stationary(chain: *const MwChain, out: *mut f64, len: usize) -> MwStatus {
    guard(|| copy_out(chain_ref(chain)?.spectrum.stationary(), out, len))
}

/// Writes the eigenvalues in descending order into `out[0..d]`.
#[no_mangle]
pub unsafe extern "C" fn mw_chain_eigenvalues(chain: *const MwChain, out: *mut f64, len: usize) -> MwStatus {
    guard(|| copy_out(chain_ref(chain)?.spectrum.eigenvalues(), out, len))
}

/// `Δ(t) = ‖μPᵗ − μ′Pᵗ‖²_π` for distributions of length `d`.
#[no_mangle]
pub unsafe extern "C" fn mw_decay_distance_sq(
    chain: *const MwChain,
    mu: *const f64,
    mu_prime: *const f64,
    d: usize,
    t: u64,
    out: *mut f64,
) -> MwStatus {
    guard(|| {
        let c = chain_ref(chain)?;
        let (a, b) = (slice(mu, d, "mu")?, slice(mu_prime, d, "mu_prime")?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = geometry::decay_distance_sq(a, b, &c.spectrum, t).map_err(lib)?;
        Ok(())
    })
}

unsafe fn instance(
    chain: *const MwChain,
    mu: *const f64,
    mu_prime: *const f64,
    d: usize,
    t: u64,
) -> Result<TestingInstance, (MwStatus, String)> {
    let c = chain_ref(chain)?;
    let (a, b) = (distribution(mu, d, "mu")?, distribution(mu_prime, d, "mu_prime")?);
    TestingInstance::with_spectrum(c.chain.clone(), c.spectrum.clone(), a, b, t).map_err(lib)
}

/// Samples after which the likelihood-ratio test errs with probability below
/// `delta`, for a pairwise `epsilon`-bounded triple. `UINT64_MAX` means infinite.
#[no_mangle]
pub unsafe extern "C" fn mw_sample_upper_bound(
    chain: *const MwChain,
    mu: *const f64,
    mu_prime: *const f64,
    d: usize,
    t: u64,
    epsilon: f64,
    delta: f64,
    out: *mut u64,
) -> MwStatus {
    guard(|| {
        let inst = instance(chain, mu, mu_prime, d, t)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = count_to_u64(complexity::sample_upper_bound(&inst, epsilon, delta).map_err(lib)?);
        Ok(())
    })
}

/// Samples below which every test errs with probability at least `½ − delta`.
/// `UINT64_MAX` means infinite.
#[no_mangle]
pub unsafe extern "C" fn mw_sample_lower_bound(
    chain: *const MwChain,
    mu: *const f64,
    mu_prime: *const f64,
    d: usize,
    t: u64,
    epsilon: f64,
    delta: f64,
    out: *mut u64,
) -> MwStatus {
    guard(|| {
        let inst = instance(chain, mu, mu_prime, d, t)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = count_to_u64(complexity::sample_lower_bound(&inst, epsilon, delta).map_err(lib)?);
        Ok(())
    })
}

/// Monte Carlo error of the likelihood-ratio test on `n` draws after `t` steps,
/// `trials` runs per hypothesis, deterministic in `seed`.
#[no_mangle]
pub unsafe extern "C" fn mw_estimate_error(
    chain: *const MwChain,
    mu: *const f64,
    mu_prime: *const f64,
    d: usize,
    t: u64,
    n: u64,
    trials: u64,
    seed: u64,
    out: *mut MwErrorEstimate,
) -> MwStatus {
    guard(|| {
        let inst = instance(chain, mu, mu_prime, d, t)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let e = estimate_error(&inst, n, trials, seed).map_err(lib)?;
        *out = MwErrorEstimate {
            err_mu: e.err_mu,
            err_mu_prime: e.err_mu_prime,
            err_max: e.err_max,
            trials: e.trials,
            ci_halfwidth: e.ci_halfwidth,
        };
        Ok(())
    })
}
