//! C ABI over `glassnet`.
//!
//! Networks live behind an opaque [`GlassnetNetwork`] handle. Every fallible
//! call returns a [`GlassnetStatus`]; on failure a message is kept per thread
//! and can be read with [`glassnet_last_error_message`]. Strings returned
//! through out-parameters are owned by the caller and must be released with
//! [`glassnet_string_free`]. Set indices are 1-based, matching the CLI.
//!
//! Panics never cross the boundary; they surface as `GLASSNET_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use glassnet::dynamics::{simulate, SimConfig};
use glassnet::factorization::factorize;
use glassnet::signs::{count_allowed_row_signatures, CountMode, StableFamily};
use glassnet::stability::{enumerate_stable_sets, is_stable_set, Listing, Verdict};
use glassnet::{ConstraintCheck, GlassError, GlassNetwork, IndexSet, InputMode, NetworkFile, WeightMatrix};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlassnetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// Output constraint violated, or malformed dimensions, sets or families.
    Validation = 4,
    NotStable = 5,
    OutOfRange = 6,
    Numerical = 7,
    Internal = 8,
    Panic = 9,
}

/// Opaque network handle.
pub struct GlassnetNetwork {
    inner: GlassNetwork,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(GlassnetStatus, String);

impl From<GlassError> for Failure {
    fn from(e: GlassError) -> Self {
        let status = match &e {
            GlassError::Parse(_) => GlassnetStatus::Parse,
            GlassError::NotStable(_) => GlassnetStatus::NotStable,
            GlassError::IndexOutOfRange { .. }
            | GlassError::EnumerationTooLarge { .. }
            | GlassError::DimensionTooLarge { .. } => GlassnetStatus::OutOfRange,
            GlassError::Singular | GlassError::EpsilonUnderflow(_) | GlassError::NumericalFailure(_) => {
                GlassnetStatus::Numerical
            }
            GlassError::InternalConsistency(_) => GlassnetStatus::Internal,
            _ => GlassnetStatus::Validation,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(GlassnetStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GlassnetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GlassnetStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("panic inside glassnet".into());
            GlassnetStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(GlassnetStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn network_arg<'a>(h: *const GlassnetNetwork) -> Result<&'a GlassNetwork, Failure> {
    h.as_ref().map(|n| &n.inner).ok_or_else(|| null("network"))
}

unsafe fn set_arg(net: &GlassNetwork, indices: *const u32, len: usize) -> Result<IndexSet, Failure> {
    let one_based: Vec<usize> = slice_arg(indices, len, "indices")?.iter().map(|&i| i as usize).collect();
    Ok(IndexSet::from_one_based(net.dim(), &one_based)?)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = CString::new(s).expect("JSON has no nul bytes").into_raw();
    Ok(())
}

unsafe fn write_network(out: *mut *mut GlassnetNetwork, net: GlassNetwork) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(GlassnetNetwork { inner: net }));
    Ok(())
}

fn check(allow_violations: bool) -> ConstraintCheck {
    if allow_violations {
        ConstraintCheck::Bypass
    } else {
        ConstraintCheck::Enforce
    }
}

unsafe fn weights(n: usize, w: *const f64) -> Result<WeightMatrix, Failure> {
    let entries = slice_arg(w, n * n, "weights")?;
    let rows: Vec<Vec<f64>> = entries.chunks(n.max(1)).map(<[f64]>::to_vec).collect();
    Ok(WeightMatrix::from_rows(&rows)?)
}

/// Most recent error message on this thread, or null. Valid until the next
/// failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn glassnet_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn glassnet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a network from an `n × n` row-major weight matrix.
///
/// # Safety
/// `weights_row_major` must point to `n * n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn glassnet_network_new(
    n: usize,
    weights_row_major: *const f64,
    allow_violations: bool,
    out: *mut *mut GlassnetNetwork,
) -> GlassnetStatus {
    guard(|| {
        let w = weights(n, weights_row_major)?;
        write_network(out, GlassNetwork::with_mode(w, InputMode::Vanishing, check(allow_violations))?)
    })
}

/// Builds the `(n + 1)`-unit network with the constant input `mu` carried by a
/// clamped last unit.
///
/// # Safety
/// `weights_row_major` must point to `n * n` doubles, `mu` to `n` doubles, and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn glassnet_network_with_input(
    n: usize,
    weights_row_major: *const f64,
    mu: *const f64,
    allow_violations: bool,
    out: *mut *mut GlassnetNetwork,
) -> GlassnetStatus {
    guard(|| {
        let w = weights(n, weights_row_major)?;
        let mu = slice_arg(mu, n, "mu")?;
        write_network(out, GlassNetwork::embed_input_with(&w, mu, check(allow_violations))?)
    })
}

/// Parses the JSON network format used by the CLI.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn glassnet_network_from_json(
    json: *const c_char,
    allow_violations: bool,
    out: *mut *mut GlassnetNetwork,
) -> GlassnetStatus {
    guard(|| {
        let file = NetworkFile::parse(str_arg(json, "json")?)?;
        write_network(out, file.into_network(check(allow_violations))?)
    })
}

/// Frees a network. Null is ignored.
///
/// # Safety
/// `network` must come from a constructor above and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn glassnet_network_free(network: *mut GlassnetNetwork) {
    if !network.is_null() {
        drop(Box::from_raw(network));
    }
}

/// Number of units, including a clamped input unit.
///
/// # Safety
/// `network` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn glassnet_network_dim(network: *const GlassnetNetwork, out: *mut usize) -> GlassnetStatus {
    guard(|| {
        let net = network_arg(network)?;
        *out.as_mut().ok_or_else(|| null("output pointer"))? = net.dim();
        Ok(())
    })
}

/// Tests whether the set of 1-based `indices` is stable. `margin` may be null.
///
/// # Safety
/// `indices` must point to `len` values; `stable` must be writable.
#[no_mangle]
pub unsafe extern "C" fn glassnet_is_stable_set(
    network: *const GlassnetNetwork,
    indices: *const u32,
    len: usize,
    stable: *mut bool,
    margin: *mut f64,
) -> GlassnetStatus {
    guard(|| {
        let net = network_arg(network)?;
        let report = is_stable_set(net, &set_arg(net, indices, len)?)?;
        *stable.as_mut().ok_or_else(|| null("stable"))? = report.verdict == Verdict::Stable;
        if let Some(m) = margin.as_mut() {
            *m = report.margin;
        }
        Ok(())
    })
}

/// JSON array of the stable set reports, in canonical order.
///
/// # Safety
/// `network` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn glassnet_stable_sets_json(
    network: *const GlassnetNetwork,
    out: *mut *mut c_char,
) -> GlassnetStatus {
    guard(|| {
        let net = network_arg(network)?;
        let reports: Vec<_> = enumerate_stable_sets(net, Listing::StableAndOrigin)?
            .into_iter()
            .filter(|r| r.verdict == Verdict::Stable)
            .collect();
        write_string(out, serde_json::to_string(&reports).expect("serializable"))
    })
}

/// Simulates from `x0` and returns the trajectory as JSON.
///
/// # Safety
/// `x0` must point to `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn glassnet_simulate_json(
    network: *const GlassnetNetwork,
    x0: *const f64,
    len: usize,
    max_time: f64,
    max_switches: usize,
    out: *mut *mut c_char,
) -> GlassnetStatus {
    guard(|| {
        let net = network_arg(network)?;
        let x0 = slice_arg(x0, len, "x0")?;
        let tr = simulate(net, x0, &SimConfig { max_time, max_switches })?;
        write_string(out, serde_json::to_string(&tr).expect("serializable"))
    })
}

/// Semipositive factorization of a stable set, as JSON.
///
/// # Safety
/// `indices` must point to `len` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn glassnet_factorize_json(
    network: *const GlassnetNetwork,
    indices: *const u32,
    len: usize,
    epsilon: f64,
    out: *mut *mut c_char,
) -> GlassnetStatus {
    guard(|| {
        let net = network_arg(network)?;
        let f = factorize(net, &set_arg(net, indices, len)?, epsilon)?;
        write_string(out, serde_json::to_string(&f).expect("serializable"))
    })
}

/// Closed-form count of allowed signatures for one 1-based `row`, written as
/// a decimal string (counts can exceed 64 bits). `family` uses the CLI form,
/// e.g. `"nested:1;1,2"`; `mode` is `unconstrained`, `vanishing` or
/// `nonvanishing`.
///
/// # Safety
/// `family` and `mode` must be nul-terminated strings and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn glassnet_count_signatures(
    family: *const c_char,
    n: usize,
    row: usize,
    mode: *const c_char,
    out: *mut *mut c_char,
) -> GlassnetStatus {
    guard(|| {
        let mode = CountMode::parse(str_arg(mode, "mode")?)?;
        let fam = StableFamily::parse(str_arg(family, "family")?, n, mode == CountMode::Nonvanishing)?;
        write_string(out, count_allowed_row_signatures(&fam, n, row, mode)?.to_string())
    })
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn glassnet_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
