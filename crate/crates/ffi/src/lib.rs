//! C ABI for qgforge.
//!
//! Magmas are opaque `QgMagma` handles created by the `qg_magma_*`
//! constructors and released with [`qg_magma_free`]. Every fallible call
//! returns a [`QgStatus`]; on failure the thread-local message from
//! [`qg_last_error_message`] says what went wrong. Results are written
//! through out-pointers, which are left untouched on failure.
//!
//! Elements are `size_t` indices `0..order`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qgforge::identities::{self, IdentityConfig};
use qgforge::products::direct_product;
use qgforge::search::count_latin_squares;
use qgforge::structure::{fan_certificate, structure_report};
use qgforge::{io, FiniteMagma, QgError};

/// Status codes. `QG_OK` is zero; everything else is an error.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QgStatus {
    QgOk = 0,
    /// A required pointer argument was null.
    QgErrNull = 1,
    /// Malformed table or factor data.
    QgErrConstruction = 2,
    /// A division was requested on a magma that lacks it.
    QgErrAxiom = 3,
    QgErrPrecondition = 4,
    QgErrCapacity = 5,
    QgErrInternal = 6,
    QgErrParse = 7,
    QgErrIo = 8,
    /// The output buffer is too small; the needed length was still written.
    QgErrBufferTooSmall = 9,
    /// Identities were checked and some failed.
    QgErrVerification = 10,
    /// A Rust panic was caught at the boundary.
    QgErrPanic = 11,
}

/// Opaque magma handle.
pub struct QgMagma {
    inner: FiniteMagma,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior nul"));
}

fn status_of(e: &QgError) -> QgStatus {
    match e {
        QgError::Construction { .. } => QgStatus::QgErrConstruction,
        QgError::AxiomViolation(_) => QgStatus::QgErrAxiom,
        QgError::Precondition(_) => QgStatus::QgErrPrecondition,
        QgError::Capacity(_) | QgError::SearchExhausted(_) => QgStatus::QgErrCapacity,
        QgError::Internal(_) => QgStatus::QgErrInternal,
        QgError::Parse(_) => QgStatus::QgErrParse,
        QgError::Io(_) => QgStatus::QgErrIo,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (QgStatus, String)>) -> QgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QgStatus::QgOk
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside qgforge");
            QgStatus::QgErrPanic
        }
    }
}

fn lib<T>(r: qgforge::Result<T>) -> Result<T, (QgStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (QgStatus, String) {
    (QgStatus::QgErrNull, format!("{what} is null"))
}

unsafe fn magma<'a>(m: *const QgMagma) -> Result<&'a FiniteMagma, (QgStatus, String)> {
    m.as_ref().map(|h| &h.inner).ok_or_else(|| null("magma handle"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), (QgStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn boxed(m: FiniteMagma) -> *mut QgMagma {
    Box::into_raw(Box::new(QgMagma { inner: m }))
}

/// Message for the last failed call on this thread; empty after a
/// successful call. Valid until the next qgforge call on this thread.
#[no_mangle]
pub extern "C" fn qg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a magma from a row-major table of `order * order` entries.
///
/// # Safety
/// `table` must point to `order * order` readable values; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_from_table(order: usize, table: *const usize, out: *mut *mut QgMagma) -> QgStatus {
    guard(|| {
        if table.is_null() {
            return Err(null("table"));
        }
        let cells = order
            .checked_mul(order)
            .ok_or((QgStatus::QgErrCapacity, "order overflows".to_string()))?;
        let flat = std::slice::from_raw_parts(table, cells).to_vec();
        let m = lib(FiniteMagma::from_flat(order, flat))?;
        put(out, boxed(m))
    })
}

/// Parses a magma in the text or JSON file format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_parse(text: *const c_char, out: *mut *mut QgMagma) -> QgStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (QgStatus::QgErrParse, "input is not UTF-8".to_string()))?;
        let m = lib(io::parse_magma(s))?;
        put(out, boxed(m))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `m` must come from a qgforge constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_free(m: *mut QgMagma) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Order of the magma; 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_order(m: *const QgMagma) -> usize {
    m.as_ref().map_or(0, |h| h.inner.order())
}

/// `*out = a·b`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_mul(m: *const QgMagma, a: usize, b: usize, out: *mut usize) -> QgStatus {
    guard(|| {
        let m = magma(m)?;
        if a >= m.order() || b >= m.order() {
            return Err((
                QgStatus::QgErrPrecondition,
                format!("element out of range 0..{}", m.order()),
            ));
        }
        put(out, m.mul(a, b))
    })
}

/// `*out = a\b`, the `x` with `a·x = b`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_div_left(m: *const QgMagma, a: usize, b: usize, out: *mut usize) -> QgStatus {
    guard(|| {
        let v = lib(magma(m)?.div_l(a, b))?;
        put(out, v)
    })
}

/// `*out = b/a`, the `y` with `y·a = b`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_div_right(m: *const QgMagma, b: usize, a: usize, out: *mut usize) -> QgStatus {
    guard(|| {
        let v = lib(magma(m)?.div_r(a, b))?;
        put(out, v)
    })
}

/// 1 if every row is a permutation, 0 otherwise or for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_is_left_quasigroup(m: *const QgMagma) -> i32 {
    m.as_ref().map_or(0, |h| i32::from(h.inner.is_left_quasigroup()))
}

/// 1 if every column is a permutation, 0 otherwise or for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_is_right_quasigroup(m: *const QgMagma) -> i32 {
    m.as_ref().map_or(0, |h| i32::from(h.inner.is_right_quasigroup()))
}

/// 1 if the table is a Latin square, 0 otherwise or for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_is_quasigroup(m: *const QgMagma) -> i32 {
    m.as_ref().map_or(0, |h| i32::from(h.inner.is_quasigroup()))
}

/// Two-sided unit; `QG_ERR_PRECONDITION` if there is none.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_unit(m: *const QgMagma, out: *mut usize) -> QgStatus {
    guard(|| {
        let u = magma(m)?
            .find_unit()
            .ok_or((QgStatus::QgErrPrecondition, "no two-sided unit".to_string()))?;
        put(out, u)
    })
}

unsafe fn write_elements(
    elems: &[usize],
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> Result<(), (QgStatus, String)> {
    put(len, elems.len())?;
    if elems.len() > cap {
        return Err((
            QgStatus::QgErrBufferTooSmall,
            format!("need room for {} elements", elems.len()),
        ));
    }
    if !elems.is_empty() {
        if buf.is_null() {
            return Err(null("buffer"));
        }
        ptr::copy_nonoverlapping(elems.as_ptr(), buf, elems.len());
    }
    Ok(())
}

/// Values for the `which` argument of [`qg_magma_subset`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QgSubset {
    QgSubsetCommutant = 0,
    QgSubsetLeftNucleus = 1,
    QgSubsetMiddleNucleus = 2,
    QgSubsetRightNucleus = 3,
    QgSubsetNucleus = 4,
    QgSubsetCenter = 5,
    /// Requires a fan quasigroup.
    QgSubsetFan = 6,
}

const SUBSETS: [QgSubset; 7] = [
    QgSubset::QgSubsetCommutant,
    QgSubset::QgSubsetLeftNucleus,
    QgSubset::QgSubsetMiddleNucleus,
    QgSubset::QgSubsetRightNucleus,
    QgSubset::QgSubsetNucleus,
    QgSubset::QgSubsetCenter,
    QgSubset::QgSubsetFan,
];

/// Writes the elements of the subset `which` (a [`QgSubset`] value) in
/// increasing order to `buf` and their number to `*len`. With `cap` too small, only `*len` is written and the
/// call returns `QG_ERR_BUFFER_TOO_SMALL`.
///
/// # Safety
/// `m` must be a live handle; `buf` must have room for `cap` values;
/// `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_subset(
    m: *const QgMagma,
    which: i32,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> QgStatus {
    guard(|| {
        let m = magma(m)?;
        let which = SUBSETS
            .get(usize::try_from(which).unwrap_or(usize::MAX))
            .copied()
            .ok_or((QgStatus::QgErrPrecondition, format!("unknown subset {which}")))?;
        let elems = if which == QgSubset::QgSubsetFan {
            let cert = fan_certificate(m).ok_or((QgStatus::QgErrPrecondition, "not a fan quasigroup".to_string()))?;
            cert.fan().to_vec()
        } else {
            let r = structure_report(m);
            match which {
                QgSubset::QgSubsetCommutant => r.com,
                QgSubset::QgSubsetLeftNucleus => r.n_l,
                QgSubset::QgSubsetMiddleNucleus => r.n_m,
                QgSubset::QgSubsetRightNucleus => r.n_r,
                QgSubset::QgSubsetNucleus => r.nucleus,
                QgSubset::QgSubsetCenter | QgSubset::QgSubsetFan => r.center,
            }
            .to_vec()
        };
        write_elements(&elems, buf, cap, len)
    })
}

/// 1 if the magma is a fan quasigroup, 0 otherwise or for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_is_fan(m: *const QgMagma) -> i32 {
    m.as_ref().map_or(0, |h| i32::from(fan_certificate(&h.inner).is_some()))
}

/// Direct product `a × b`, pairs encoded as `x·|b| + y`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_direct_product(a: *const QgMagma, b: *const QgMagma, out: *mut *mut QgMagma) -> QgStatus {
    guard(|| {
        let p = lib(direct_product(&[magma(a)?.clone(), magma(b)?.clone()]))?;
        put(out, boxed(p))
    })
}

/// Canonical JSON magma file for `m`. Free the string with
/// [`qg_string_free`].
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_magma_to_json(m: *const QgMagma, out: *mut *mut c_char) -> QgStatus {
    guard(|| {
        let s = io::magma_to_json(magma(m)?, None);
        let c = CString::new(s).map_err(|_| (QgStatus::QgErrInternal, "nul in JSON".to_string()))?;
        put(out, c.into_raw())
    })
}

/// Releases a string returned by qgforge. Null is ignored.
///
/// # Safety
/// `s` must come from qgforge and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Checks the identities selected by `selection` (for example
/// `"70-79,82-94"`; null selects all) and writes the number of failing
/// cases to `*failures`. Returns `QG_ERR_VERIFICATION` when some fail and
/// `QG_ERR_PRECONDITION` when fan identities are requested of a magma that
/// is not a fan quasigroup.
///
/// # Safety
/// `m` must be a live handle; `selection` null or nul-terminated;
/// `failures` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_verify_identities(
    m: *const QgMagma,
    selection: *const c_char,
    failures: *mut u64,
) -> QgStatus {
    guard(|| {
        let m = magma(m)?;
        let ids = if selection.is_null() {
            identities::all_identity_ids()
        } else {
            let s = CStr::from_ptr(selection)
                .to_str()
                .map_err(|_| (QgStatus::QgErrParse, "selection is not UTF-8".to_string()))?;
            lib(identities::parse_identity_selection(s))?
        };
        let cert = fan_certificate(m);
        let reports = lib(identities::verify(m, cert.as_ref(), &ids, &IdentityConfig::default()))?;
        let total: u64 = reports.iter().map(|r| r.failure_count).sum();
        put(failures, total)?;
        if total > 0 {
            return Err((QgStatus::QgErrVerification, format!("{total} failing cases")));
        }
        Ok(())
    })
}

/// Number of Latin squares of order `n` (reduced ones if `reduced` is
/// nonzero), for `1 <= n <= 7`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_count_latin_squares(n: usize, reduced: i32, out: *mut u64) -> QgStatus {
    guard(|| {
        let c = lib(count_latin_squares(n, reduced != 0))?;
        put(out, c)
    })
}
