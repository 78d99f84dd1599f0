//! C ABI for the qbernstein toolkit.
//!
//! Conventions:
//! - Evaluation points are opaque [`QbPoint`] handles created with
//!   [`qb_point_new`] and released with [`qb_point_free`].
//! - Exact values cross the boundary as `"num/den"` strings allocated by
//!   Rust; release them with [`qb_string_free`].
//! - Every fallible call returns a [`QbStatus`]; on failure,
//!   [`qb_last_error`] returns a thread-local message describing it.

use std::cell::RefCell;
use std::ffi::CString;
use std::ptr;

use libc::c_char;

use qbernstein::bernstein::{q_basis, q_basis_f64, ratio_identity, sum_basis};
use qbernstein::qnum::{gaussian_binomial, FloatPoint, QPoint};
use qbernstein::rational::Rational;
use qbernstein::stirling::q_stirling;
use qbernstein::verify::{run_verify, FaultInjection, VerifyConfig};
use qbernstein::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QbStatus {
    /// Success.
    Ok = 0,
    /// A verify run completed but at least one identity failed.
    IdentityFailure = 1,
    /// An argument was outside its domain (q, X, or configuration).
    InvalidArgument = 2,
    /// A required pointer argument was null.
    NullPointer = 3,
    /// The requested value is undefined at this point (e.g. x = 1 for the
    /// ratio identity).
    DomainError = 4,
}

/// Opaque exact evaluation point `(q, X = q^x)`.
pub struct QbPoint {
    inner: QPoint,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let stored = CString::new(message).unwrap_or_else(|_| CString::new("invalid error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(stored));
}

fn status_for(err: &Error) -> QbStatus {
    match err {
        Error::ZeroComplement => QbStatus::DomainError,
        _ => QbStatus::InvalidArgument,
    }
}

/// Returns the message for the most recent failure on this thread, or null.
/// The pointer stays valid until the next failing call on the same thread;
/// do not free it.
#[no_mangle]
pub extern "C" fn qb_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |message| message.as_ptr())
    })
}

unsafe fn write_string(out: *mut *mut c_char, value: String) -> QbStatus {
    match CString::new(value) {
        Ok(s) => {
            *out = s.into_raw();
            QbStatus::Ok
        }
        Err(_) => {
            set_error("value contained an interior NUL byte".into());
            QbStatus::InvalidArgument
        }
    }
}

/// Creates an exact evaluation point from `q = q_num/q_den` and
/// `X = x_num/x_den`, requiring `0 < q < 1` and `q <= X <= 1`.
///
/// # Safety
/// `out` must be a valid pointer to a `QbPoint*` slot.
#[no_mangle]
pub unsafe extern "C" fn qb_point_new(
    q_num: i64,
    q_den: i64,
    x_num: i64,
    x_den: i64,
    out: *mut *mut QbPoint,
) -> QbStatus {
    if out.is_null() {
        return QbStatus::NullPointer;
    }
    match QPoint::from_ints(q_num, q_den, x_num, x_den) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(QbPoint { inner }));
            QbStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            status_for(&e)
        }
    }
}

/// Creates the reflected point `(q, q/X)` (the point for `1 - x`).
///
/// # Safety
/// `point` must come from [`qb_point_new`] and not be freed; `out` must be
/// a valid pointer to a `QbPoint*` slot.
#[no_mangle]
pub unsafe extern "C" fn qb_point_reflect(
    point: *const QbPoint,
    out: *mut *mut QbPoint,
) -> QbStatus {
    if point.is_null() || out.is_null() {
        return QbStatus::NullPointer;
    }
    let reflected = (*point).inner.reflect();
    *out = Box::into_raw(Box::new(QbPoint { inner: reflected }));
    QbStatus::Ok
}

/// Releases a point created by [`qb_point_new`] or [`qb_point_reflect`].
///
/// # Safety
/// `point` must be such a pointer, not yet freed; null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn qb_point_free(point: *mut QbPoint) {
    if !point.is_null() {
        drop(Box::from_raw(point));
    }
}

/// Releases a string returned by any `qb_*` call.
///
/// # Safety
/// `s` must be a string returned by this library, not yet freed; null is a
/// no-op.
#[no_mangle]
pub unsafe extern "C" fn qb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes `[x]_q` as a `"num/den"` string.
///
/// # Safety
/// `point` must be a live point; `out` must be a valid `char**` slot.
#[no_mangle]
pub unsafe extern "C" fn qb_q_number(point: *const QbPoint, out: *mut *mut c_char) -> QbStatus {
    if point.is_null() || out.is_null() {
        return QbStatus::NullPointer;
    }
    write_string(out, (*point).inner.q_number().to_string())
}

/// Writes `[1-x]_q` as a `"num/den"` string.
///
/// # Safety
/// Same contract as [`qb_q_number`].
#[no_mangle]
pub unsafe extern "C" fn qb_q_complement(point: *const QbPoint, out: *mut *mut c_char) -> QbStatus {
    if point.is_null() || out.is_null() {
        return QbStatus::NullPointer;
    }
    write_string(out, (*point).inner.q_complement().to_string())
}

/// Writes the exact basis value `B_{k,n}(x,q)` as a `"num/den"` string.
///
/// # Safety
/// Same contract as [`qb_q_number`].
#[no_mangle]
pub unsafe extern "C" fn qb_basis(
    k: u32,
    n: u32,
    point: *const QbPoint,
    out: *mut *mut c_char,
) -> QbStatus {
    if point.is_null() || out.is_null() {
        return QbStatus::NullPointer;
    }
    write_string(out, q_basis(k, n, &(*point).inner).to_string())
}

/// Writes the exact basis sum `(1 + (1-q)[x]_q[1-x]_q)^n`.
///
/// # Safety
/// Same contract as [`qb_q_number`].
#[no_mangle]
pub unsafe extern "C" fn qb_sum_basis(
    n: u32,
    point: *const QbPoint,
    out: *mut *mut c_char,
) -> QbStatus {
    if point.is_null() || out.is_null() {
        return QbStatus::NullPointer;
    }
    write_string(out, sum_basis(n, &(*point).inner).to_string())
}

/// Writes the ratio form `((n-k+1)/k)([x]_q/[1-x]_q) B_{k-1,n}`, which
/// equals `B_{k,n}`. Fails with `DomainError` where `[1-x]_q = 0` (x = 1).
/// Requires `k >= 1`.
///
/// # Safety
/// Same contract as [`qb_q_number`].
#[no_mangle]
pub unsafe extern "C" fn qb_ratio_identity(
    k: u32,
    n: u32,
    point: *const QbPoint,
    out: *mut *mut c_char,
) -> QbStatus {
    if point.is_null() || out.is_null() {
        return QbStatus::NullPointer;
    }
    if k == 0 {
        set_error("ratio identity needs k >= 1".into());
        return QbStatus::InvalidArgument;
    }
    match ratio_identity(k, n, &(*point).inner) {
        Ok(value) => write_string(out, value.to_string()),
        Err(e) => {
            set_error(e.to_string());
            status_for(&e)
        }
    }
}

/// Evaluates `B_{k,n}(x,q)` on the floating path, with `q^x = exp(x ln q)`.
///
/// # Safety
/// `out` must be a valid `double*` slot.
#[no_mangle]
pub unsafe extern "C" fn qb_basis_f64(k: u32, n: u32, q: f64, x: f64, out: *mut f64) -> QbStatus {
    if out.is_null() {
        return QbStatus::NullPointer;
    }
    match FloatPoint::new(q, x) {
        Ok(fp) => {
            *out = q_basis_f64(k, n, &fp);
            QbStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            QbStatus::InvalidArgument
        }
    }
}

/// Writes the Gaussian binomial `C(n,k)_q` at `q = q_num/q_den` as a
/// `"num/den"` string. Requires `0 < q < 1`.
///
/// # Safety
/// `out` must be a valid `char**` slot.
#[no_mangle]
pub unsafe extern "C" fn qb_gaussian_binomial(
    n: u32,
    k: u32,
    q_num: i64,
    q_den: i64,
    out: *mut *mut c_char,
) -> QbStatus {
    if out.is_null() {
        return QbStatus::NullPointer;
    }
    match checked_q(q_num, q_den) {
        Ok(q) => write_string(out, gaussian_binomial(n, k, &q).to_string()),
        Err(status) => status,
    }
}

/// Writes the q-Stirling number `S(n,k:q)` as a `"num/den"` string.
/// Requires `0 < q < 1`.
///
/// # Safety
/// `out` must be a valid `char**` slot.
#[no_mangle]
pub unsafe extern "C" fn qb_q_stirling(
    n: u32,
    k: u32,
    q_num: i64,
    q_den: i64,
    out: *mut *mut c_char,
) -> QbStatus {
    if out.is_null() {
        return QbStatus::NullPointer;
    }
    match checked_q(q_num, q_den) {
        Ok(q) => write_string(out, q_stirling(n, k, &q).to_string()),
        Err(status) => status,
    }
}

fn checked_q(q_num: i64, q_den: i64) -> Result<Rational, QbStatus> {
    let q = Rational::new(q_num, q_den).map_err(|e| {
        set_error(e.to_string());
        QbStatus::InvalidArgument
    })?;
    if q <= Rational::zero() || q >= Rational::one() {
        set_error(format!("q must lie in (0,1), got {q}"));
        return Err(QbStatus::InvalidArgument);
    }
    Ok(q)
}

/// Runs the identity suites over the default grid with the given `max_n`
/// and writes the JSON report. Returns `Ok` when every identity passes and
/// `IdentityFailure` otherwise (the report is written either way).
///
/// # Safety
/// `out_json` must be a valid `char**` slot.
#[no_mangle]
pub unsafe extern "C" fn qb_verify_json(
    max_n: u32,
    parallel: bool,
    out_json: *mut *mut c_char,
) -> QbStatus {
    if out_json.is_null() {
        return QbStatus::NullPointer;
    }
    let config = VerifyConfig {
        max_n,
        parallel,
        ..VerifyConfig::default()
    };
    let report = match run_verify(&config, None, FaultInjection::default()) {
        Ok(report) => report,
        Err(e) => {
            set_error(e.to_string());
            return QbStatus::InvalidArgument;
        }
    };
    let json = serde_json::to_string(&report).expect("report serializes");
    let all_pass = report.all_pass();
    let status = write_string(out_json, json);
    if status != QbStatus::Ok {
        return status;
    }
    if all_pass {
        QbStatus::Ok
    } else {
        QbStatus::IdentityFailure
    }
}
