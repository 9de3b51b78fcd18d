//! C ABI over `turanlab`.
//!
//! Hypergraphs cross the boundary as opaque `TlHypergraph` handles. Every
//! fallible call returns a `TlStatus`. On failure the message is available
//! from `tl_last_error` on the same thread until the next call. Strings
//! returned through `char **out` belong to the caller and must be released
//! with `tl_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use turanlab::checkers::{is_cancellative, is_k_free, verify};
use turanlab::constructions::turan_hypergraph;
use turanlab::format::{parse_hypergraph, to_text};
use turanlab::search::{extremal_number, Predicate, SearchConfig};
use turanlab::stability::{
    bipartite_distance_analysis, extract_partition_cancellative, extract_partition_generalized,
    extract_partition_kfree,
};
use turanlab::{Error, Hypergraph};

/// Opaque hypergraph handle.
pub struct TlHypergraph {
    inner: Hypergraph,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TlStatus {
    Ok = 0,
    /// The call succeeded and the checked property does not hold.
    Violated = 1,
    InvalidArgument = 2,
    ParseError = 3,
    Precondition = 4,
    TooLarge = 5,
    BudgetExhausted = 6,
    IoError = 7,
    NullPointer = 8,
    Panic = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TlStatus {
    match e {
        Error::InvalidParameter(_) => TlStatus::InvalidArgument,
        Error::InvalidEdge { .. } | Error::DuplicateEdge(_) | Error::Parse { .. } => TlStatus::ParseError,
        Error::Precondition(_) => TlStatus::Precondition,
        Error::TooLarge { .. } => TlStatus::TooLarge,
        Error::BudgetExhausted { .. } => TlStatus::BudgetExhausted,
        Error::Io(_) | Error::Json(_) => TlStatus::IoError,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<TlStatus, Failure>) -> TlStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure::Null(what))) => {
            set_error(&format!("{what} is null"));
            TlStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            TlStatus::Panic
        }
    }
}

unsafe fn handle<'a>(h: *const TlHypergraph) -> Result<&'a Hypergraph, Failure> {
    h.as_ref().map(|h| &h.inner).ok_or(Failure::Null("hypergraph"))
}

unsafe fn text_arg<'a>(s: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::Lib(Error::InvalidParameter(format!("{what} is not UTF-8"))))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::Lib(Error::InvalidParameter("interior NUL".into())))?;
    put(out, c.into_raw())
}

unsafe fn put_handle(out: *mut *mut TlHypergraph, h: Hypergraph) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(TlHypergraph { inner: h })));
    Ok(())
}

fn optional(v: usize) -> Option<usize> {
    (v != 0).then_some(v)
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on the thread.
#[no_mangle]
pub extern "C" fn tl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses the plain-text format (`n r` header, one edge of 1-based labels
/// per line).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_hypergraph_parse(text: *const c_char, out: *mut *mut TlHypergraph) -> TlStatus {
    guard(|| {
        let h = parse_hypergraph(text_arg(text, "text")?)?;
        put_handle(out, h)?;
        Ok(TlStatus::Ok)
    })
}

/// The balanced complete ℓ-partite r-graph on n vertices.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_hypergraph_turan(
    n: usize,
    r: usize,
    ell: usize,
    out: *mut *mut TlHypergraph,
) -> TlStatus {
    guard(|| {
        put_handle(out, turan_hypergraph(n, r, ell)?)?;
        Ok(TlStatus::Ok)
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `h` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tl_hypergraph_free(h: *mut TlHypergraph) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Vertex count; 0 for null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tl_hypergraph_vertex_count(h: *const TlHypergraph) -> usize {
    h.as_ref().map_or(0, |h| h.inner.n())
}

/// Uniformity; 0 for null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tl_hypergraph_uniformity(h: *const TlHypergraph) -> usize {
    h.as_ref().map_or(0, |h| h.inner.r())
}

/// Edge count; 0 for null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tl_hypergraph_edge_count(h: *const TlHypergraph) -> usize {
    h.as_ref().map_or(0, |h| h.inner.len())
}

/// The plain-text form.
///
/// # Safety
/// `h` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_hypergraph_to_text(h: *const TlHypergraph, out: *mut *mut c_char) -> TlStatus {
    guard(|| {
        put_string(out, to_text(handle(h)?))?;
        Ok(TlStatus::Ok)
    })
}

/// Writes whether a 3-graph is cancellative.
///
/// # Safety
/// `h` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_is_cancellative(h: *const TlHypergraph, out: *mut bool) -> TlStatus {
    guard(|| {
        put(out, is_cancellative(handle(h)?)?)?;
        Ok(TlStatus::Ok)
    })
}

/// Writes whether no (ℓ+1)-set has all of its pairs covered.
///
/// # Safety
/// `h` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_is_k_free(h: *const TlHypergraph, ell: usize, out: *mut bool) -> TlStatus {
    guard(|| {
        put(out, is_k_free(handle(h)?, ell)?)?;
        Ok(TlStatus::Ok)
    })
}

/// Runs a named check (as in `turanlab verify`) and writes its JSON report.
/// `ell = 0` means "not given". Returns `Violated` with the report still
/// written when the check fails.
///
/// # Safety
/// `name` must be a NUL-terminated string, `h` a live handle and `out` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_verify_json(
    name: *const c_char,
    h: *const TlHypergraph,
    ell: usize,
    out: *mut *mut c_char,
) -> TlStatus {
    guard(|| {
        let report = verify(text_arg(name, "name")?, handle(h)?, optional(ell))?;
        put_string(out, serde_json::to_string(&report).map_err(Error::from)?)?;
        Ok(if report.holds { TlStatus::Ok } else { TlStatus::Violated })
    })
}

/// Stability report as JSON. `method` is one of `cancellative`, `kfree`,
/// `generalized`, `bipartite`; `ell` and `r` are 0 when not needed.
///
/// # Safety
/// `method` must be a NUL-terminated string, `h` a live handle and `out` a
/// writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_stability_json(
    method: *const c_char,
    h: *const TlHypergraph,
    ell: usize,
    r: usize,
    out: *mut *mut c_char,
) -> TlStatus {
    guard(|| {
        let h = handle(h)?;
        let need = |v: usize, what: &str| {
            optional(v).ok_or_else(|| Error::InvalidParameter(format!("this method needs {what}")))
        };
        let json = match text_arg(method, "method")? {
            "cancellative" => serde_json::to_string(&extract_partition_cancellative(h)?),
            "kfree" => serde_json::to_string(&extract_partition_kfree(h, need(ell, "ell")?)?),
            "generalized" => serde_json::to_string(&extract_partition_generalized(
                h,
                need(ell, "ell")?,
                need(r, "r")?,
            )?),
            "bipartite" => serde_json::to_string(&bipartite_distance_analysis(h)?),
            other => {
                return Err(Error::InvalidParameter(format!("unknown stability method '{other}'")).into())
            }
        }
        .map_err(Error::from)?;
        put_string(out, json)?;
        Ok(TlStatus::Ok)
    })
}

/// Exact extremal number by exhaustive search, as a JSON record. `ell = 0`
/// means "not given"; `threads = 0` uses every core; `budget = 0` keeps the
/// default node budget.
///
/// # Safety
/// `predicate` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tl_extremal_number_json(
    n: usize,
    r: usize,
    predicate: *const c_char,
    ell: usize,
    threads: usize,
    budget: u64,
    out: *mut *mut c_char,
) -> TlStatus {
    guard(|| {
        let predicate = Predicate::parse(text_arg(predicate, "predicate")?, optional(ell))?;
        let mut config = SearchConfig {
            thread_count: threads,
            ..SearchConfig::default()
        };
        if budget > 0 {
            config.node_budget = budget;
        }
        let record = extremal_number(n, r, &predicate, &config)?;
        put_string(out, serde_json::to_string(&record).map_err(Error::from)?)?;
        Ok(TlStatus::Ok)
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
