//! C ABI over the `schaper` crate.
//!
//! Every fallible call returns a [`SchaperStatus`]; on failure the message is available from
//! [`schaper_last_error`] on the same thread. Strings handed out must be released with
//! [`schaper_string_free`], partitions with [`schaper_partition_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use schaper::budget::Budget;
use schaper::classify::combined_bounds;
use schaper::sum_formula::symbolic_rhs;
use schaper::{james_bounds, schaper_number, Error, Partition, Prime};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchaperStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    NotPrime = 4,
    ResourceLimit = 5,
    InvalidInput = 6,
    Internal = 7,
}

/// Opaque partition handle.
pub struct SchaperPartition(Partition);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SchaperStatus {
    match e {
        Error::Parse(_) | Error::NotAPartition(_) => SchaperStatus::ParseError,
        Error::NotPrime(_) => SchaperStatus::NotPrime,
        Error::ResourceLimit(_) => SchaperStatus::ResourceLimit,
        _ => SchaperStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (SchaperStatus, String)>) -> SchaperStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SchaperStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SchaperStatus::Internal
        }
    }
}

fn lift(e: Error) -> (SchaperStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SchaperStatus, String) {
    (SchaperStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(p: *const SchaperPartition) -> Result<&'a Partition, (SchaperStatus, String)> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null("partition"))
}

fn prime(p: u32) -> Result<Prime, (SchaperStatus, String)> {
    Prime::new(p).map_err(lift)
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), (SchaperStatus, String)> {
    let c = CString::new(s).map_err(|_| (SchaperStatus::Internal, "interior nul".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Last error message on this thread; empty after a successful call. Owned by the library.
#[no_mangle]
pub extern "C" fn schaper_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses `"4,4,2,2,1"` (or `""` for the empty partition).
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn schaper_partition_parse(
    text: *const c_char,
    out: *mut *mut SchaperPartition,
) -> SchaperStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (SchaperStatus::InvalidUtf8, e.to_string()))?;
        let l = Partition::parse(s).map_err(lift)?;
        *out = Box::into_raw(Box::new(SchaperPartition(l)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`schaper_partition_parse`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn schaper_partition_free(p: *mut SchaperPartition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle or null (giving 0).
#[no_mangle]
pub unsafe extern "C" fn schaper_partition_size(p: *const SchaperPartition) -> usize {
    p.as_ref().map_or(0, |h| h.0.size())
}

/// Comma-separated parts.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schaper_partition_to_string(
    p: *const SchaperPartition,
    out: *mut *mut c_char,
) -> SchaperStatus {
    guard(|| {
        let l = handle(p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(l.to_string(), out)
    })
}

/// Exact Schaper number from the Gram matrix. `max_basis == 0` keeps the default budget.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schaper_oracle(
    p: *const SchaperPartition,
    prime_p: u32,
    max_basis: u64,
    out: *mut u32,
) -> SchaperStatus {
    guard(|| {
        let l = handle(p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut budget = Budget::default();
        if max_basis > 0 {
            budget.max_basis = max_basis;
        }
        *out = schaper_number(l, prime(prime_p)?, &budget)
            .map_err(lift)?
            .schaper_number;
        Ok(())
    })
}

/// Proved lower and upper bounds from the combinatorial classifiers.
///
/// # Safety
/// `p` must be a live handle, `lower` and `upper` writable.
#[no_mangle]
pub unsafe extern "C" fn schaper_bounds(
    p: *const SchaperPartition,
    prime_p: u32,
    lower: *mut u32,
    upper: *mut u32,
) -> SchaperStatus {
    guard(|| {
        let l = handle(p)?;
        if lower.is_null() || upper.is_null() {
            return Err(null("lower/upper"));
        }
        let p = prime(prime_p)?;
        let r = combined_bounds(l, p);
        *lower = r.lower;
        *upper = r.upper.unwrap_or_else(|| james_bounds(l, p).1);
        Ok(())
    })
}

/// Full classifier report with certificates, as JSON.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schaper_bounds_json(
    p: *const SchaperPartition,
    prime_p: u32,
    out: *mut *mut c_char,
) -> SchaperStatus {
    guard(|| {
        let l = handle(p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = combined_bounds(l, prime(prime_p)?);
        give_string(serde_json::to_string(&r).map_err(|e| lift(e.into()))?, out)
    })
}

/// Symbolic right-hand side of the sum formula as JSON: `{"shape", "prime", "terms": [{"nu", "coef"}]}`.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schaper_sum_formula_json(
    p: *const SchaperPartition,
    prime_p: u32,
    out: *mut *mut c_char,
) -> SchaperStatus {
    guard(|| {
        let l = handle(p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = symbolic_rhs(l, prime(prime_p)?);
        give_string(serde_json::to_string(&r).map_err(|e| lift(e.into()))?, out)
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn schaper_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
