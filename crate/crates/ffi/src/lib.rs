//! C ABI over the euler-congruence library.
//!
//! Curves and reports are opaque handles owned by the caller and released
//! with the matching `*_free` function. Every fallible call returns an
//! [`EcStatus`]; the message of the last failure on the calling thread is
//! available from [`ec_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use euler_congruence::data::{embedded, parse_records, Curve};
use euler_congruence::euler_characteristics::chi_t_gamma;
use euler_congruence::euler_data::{local_term, phi, sigma_zero};
use euler_congruence::report::{run_analyze, run_pair, PairOptions, Report};
use euler_congruence::Error;

/// Status codes; the numeric values match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EcStatus {
    Ok = 0,
    HypothesisFailed = 2,
    InconsistentInput = 3,
    VerdictViolation = 4,
    SchemaError = 5,
    NullArgument = 6,
    Panic = 7,
}

/// A validated curve with its arithmetic inputs.
pub struct EcCurve {
    inner: Curve,
}

/// A JSON-serializable analysis report.
pub struct EcReport {
    inner: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> EcStatus {
    match err.exit_code() {
        2 => EcStatus::HypothesisFailed,
        4 => EcStatus::VerdictViolation,
        5 => EcStatus::SchemaError,
        _ => EcStatus::InconsistentInput,
    }
}

fn guard(f: impl FnOnce() -> Result<EcStatus, Error>) -> EcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(err)) => {
            set_error(err.to_string());
            status_of(&err)
        }
        Err(_) => {
            set_error("internal panic".into());
            EcStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Error> {
    if s.is_null() {
        return Err(Error::Schema("null string argument".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Error::Schema("string argument is not UTF-8".into()))
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument".into());
            return EcStatus::NullArgument;
        }
    };
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn ec_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Looks up one of the embedded curves by label.
///
/// # Safety
/// `label` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_curve_from_label(label: *const c_char, out: *mut *mut EcCurve) -> EcStatus {
    non_null!(label, out);
    guard(|| {
        let curve = embedded(read_str(label)?)?;
        *out = Box::into_raw(Box::new(EcCurve { inner: curve }));
        Ok(EcStatus::Ok)
    })
}

/// Parses a single JSON curve record.
///
/// # Safety
/// `record` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_curve_from_json(record: *const c_char, out: *mut *mut EcCurve) -> EcStatus {
    non_null!(record, out);
    guard(|| {
        let mut records = parse_records(read_str(record)?)?;
        if records.len() != 1 {
            return Err(Error::Schema(format!("expected one record, found {}", records.len())));
        }
        let curve = records.remove(0).validate()?;
        *out = Box::into_raw(Box::new(EcCurve { inner: curve }));
        Ok(EcStatus::Ok)
    })
}

/// # Safety
/// `curve` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ec_curve_free(curve: *mut EcCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// `l + β(l) - a_l` at any prime `l`.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_local_term(curve: *const EcCurve, l: u64, out: *mut i64) -> EcStatus {
    non_null!(curve, out);
    guard(|| {
        *out = local_term(&(*curve).inner.model, l)?;
        Ok(EcStatus::Ok)
    })
}

/// Valuation of Φ over the curve's own bad primes.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_phi_valuation(curve: *const EcCurve, p: u64, out: *mut u32) -> EcStatus {
    non_null!(curve, out);
    guard(|| {
        let e = &(*curve).inner.model;
        *out = phi(e, &sigma_zero(e, None, p)?, p)?.phi_valuation;
        Ok(EcStatus::Ok)
    })
}

/// Valuation of the truncated Euler characteristic over the cyclotomic extension.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_chi_gamma_valuation(curve: *const EcCurve, p: u64, out: *mut u32) -> EcStatus {
    non_null!(curve, out);
    guard(|| {
        let c = &(*curve).inner;
        *out = chi_t_gamma(&c.model, &c.inputs, p)?.chi_valuation;
        Ok(EcStatus::Ok)
    })
}

/// Per-curve report.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_analyze(curve: *const EcCurve, p: u64, out: *mut *mut EcReport) -> EcStatus {
    non_null!(curve, out);
    guard(|| {
        let report = run_analyze(std::slice::from_ref(&(*curve).inner), p, None)?;
        *out = Box::into_raw(Box::new(EcReport { inner: report }));
        Ok(EcStatus::Ok)
    })
}

/// Pair report. `false_tate_m = 0` skips the false-Tate verdict and
/// `scan_bound = 0` uses the default bound. The report is produced for
/// refused pairs and violated verdicts too; the status tells them apart.
///
/// # Safety
/// `c1`, `c2` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ec_pair(
    c1: *const EcCurve,
    c2: *const EcCurve,
    p: u64,
    false_tate_m: u64,
    gl2: bool,
    scan_bound: u64,
    out: *mut *mut EcReport,
) -> EcStatus {
    non_null!(c1, c2, out);
    guard(|| {
        let opts = PairOptions {
            false_tate_m: (false_tate_m != 0).then_some(false_tate_m),
            gl2,
            scan_bound: (scan_bound != 0).then_some(scan_bound),
        };
        let report = run_pair(&(*c1).inner, &(*c2).inner, p, &opts)?;
        let status = match report.exit_code() {
            0 => EcStatus::Ok,
            2 => EcStatus::HypothesisFailed,
            _ => EcStatus::VerdictViolation,
        };
        if let Some(reason) = report.pair.as_ref().and_then(|s| s.refused.clone()) {
            set_error(reason);
        }
        *out = Box::into_raw(Box::new(EcReport { inner: report }));
        Ok(status)
    })
}

/// Exit code the command-line tool would return for this report.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ec_report_exit_code(report: *const EcReport) -> i32 {
    if report.is_null() {
        return EcStatus::NullArgument as i32;
    }
    (*report).inner.exit_code()
}

/// The report as JSON; release with [`ec_string_free`]. Null on failure.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ec_report_json(report: *const EcReport) -> *mut c_char {
    if report.is_null() {
        set_error("null pointer argument".into());
        return ptr::null_mut();
    }
    CString::new((*report).inner.to_json()).map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `report` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ec_report_free(report: *mut EcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must come from [`ec_report_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
