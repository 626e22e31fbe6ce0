//! C ABI over the `knowhow` crate.
//!
//! Every function returns a [`KhStatus`]. On failure a message is kept per
//! thread and read with [`kh_last_error`]. Strings handed out by the library
//! must be released with [`kh_string_free`], systems with [`kh_system_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use knowhow::model::{parse_system, EpistemicTransitionSystem};
use knowhow::proofkit::{bundled_registry, check_proof, parse_proof, Verdict};
use knowhow::semantics::{EvalError, Evaluator, NaiveEvaluator, Semantics};
use knowhow::parse_formula;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KhStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidSystem = 4,
    /// Unknown state or agent, or a witness request for a non-strategic formula.
    EvalError = 5,
    /// A proof was checked and rejected.
    Rejected = 6,
    Panic = 7,
}

/// Opaque handle to a parsed system.
pub struct KhSystem {
    sys: EpistemicTransitionSystem,
    violations: Vec<String>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: KhStatus, msg: impl Into<String>) -> KhStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> KhStatus) -> KhStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(KhStatus::Panic, "internal panic"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, KhStatus> {
    if p.is_null() {
        return Err(fail(KhStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(KhStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn give(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

fn eval_status(e: EvalError) -> KhStatus {
    fail(KhStatus::EvalError, e.to_string())
}

/// Parses a system from its text. The system need not be valid; evaluation
/// on an invalid system fails with `KH_STATUS_INVALID_SYSTEM`.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn kh_system_load(source: *const c_char, out: *mut *mut KhSystem) -> KhStatus {
    guard(|| {
        if out.is_null() {
            return fail(KhStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        let source = match text(source, "source") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match parse_system(source) {
            Ok(sys) => {
                let violations = sys.validate().violations.iter().map(|v| v.to_string()).collect();
                *out = Box::into_raw(Box::new(KhSystem { sys, violations }));
                KhStatus::Ok
            }
            Err(e) => fail(KhStatus::ParseError, e.to_string()),
        }
    })
}

/// Releases a system. Null is ignored.
///
/// # Safety
/// `sys` must come from `kh_system_load` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kh_system_free(sys: *mut KhSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// `KH_STATUS_OK` for a valid system, otherwise `KH_STATUS_INVALID_SYSTEM`
/// with the violations, one per line, in the last error.
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn kh_system_validate(sys: *const KhSystem) -> KhStatus {
    guard(|| match sys.as_ref() {
        None => fail(KhStatus::NullArgument, "system is null"),
        Some(s) if s.violations.is_empty() => KhStatus::Ok,
        Some(s) => fail(KhStatus::InvalidSystem, s.violations.join("\n")),
    })
}

unsafe fn query<'a>(
    sys: *const KhSystem,
    state: *const c_char,
    formula: *const c_char,
) -> Result<(&'a EpistemicTransitionSystem, knowhow::StateId, knowhow::Formula), KhStatus> {
    let s = sys.as_ref().ok_or_else(|| fail(KhStatus::NullArgument, "system is null"))?;
    if !s.violations.is_empty() {
        return Err(fail(KhStatus::InvalidSystem, s.violations.join("\n")));
    }
    let state = text(state, "state")?;
    let formula = text(formula, "formula")?;
    let w = s.sys.state(state).map_err(|e| fail(KhStatus::EvalError, e.to_string()))?;
    let f = parse_formula(formula).map_err(|e| fail(KhStatus::ParseError, e.to_string()))?;
    Ok((&s.sys, w, f))
}

/// Evaluates `formula` at `state`, writing the verdict to `out`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kh_eval(
    sys: *const KhSystem,
    state: *const c_char,
    formula: *const c_char,
    naive: bool,
    out: *mut bool,
) -> KhStatus {
    guard(|| {
        if out.is_null() {
            return fail(KhStatus::NullArgument, "out is null");
        }
        let (sys, w, f) = match query(sys, state, formula) {
            Ok(q) => q,
            Err(s) => return s,
        };
        let verdict = if naive {
            NaiveEvaluator::new(sys).eval(w, &f)
        } else {
            Evaluator::new(sys).eval(w, &f)
        };
        match verdict {
            Ok(v) => {
                *out = v;
                KhStatus::Ok
            }
            Err(e) => eval_status(e),
        }
    })
}

/// First witnessing profile of a top-level `S{C}` or `H{C}` formula, as
/// text like `a=L b=R`. `*out` is set to null when the formula is false.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kh_witness(
    sys: *const KhSystem,
    state: *const c_char,
    formula: *const c_char,
    out: *mut *mut c_char,
) -> KhStatus {
    guard(|| {
        if out.is_null() {
            return fail(KhStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        let (sys, w, f) = match query(sys, state, formula) {
            Ok(q) => q,
            Err(s) => return s,
        };
        match Evaluator::new(sys).witness(w, &f) {
            Ok(Some(p)) => {
                *out = give(p.display(sys).to_string());
                KhStatus::Ok
            }
            Ok(None) => KhStatus::Ok,
            Err(e) => eval_status(e),
        }
    })
}

/// Checks a proof script against the bundled lemmas. `*verdict` receives
/// the verdict text (also on rejection) and must be freed by the caller.
///
/// # Safety
/// `script` must be NUL-terminated; `verdict` writable or null.
#[no_mangle]
pub unsafe extern "C" fn kh_check_proof(script: *const c_char, verdict: *mut *mut c_char) -> KhStatus {
    guard(|| {
        if !verdict.is_null() {
            *verdict = ptr::null_mut();
        }
        let script = match text(script, "script") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let proof = match parse_proof(script) {
            Ok(p) => p,
            Err(e) => return fail(KhStatus::ParseError, e.to_string()),
        };
        let registry = match bundled_registry() {
            Ok(r) => r,
            Err(e) => return fail(KhStatus::Panic, e.to_string()),
        };
        let v = check_proof(&proof, &registry);
        if !verdict.is_null() {
            *verdict = give(v.to_string());
        }
        match v {
            Verdict::Accepted { .. } => KhStatus::Ok,
            Verdict::Rejected { .. } => fail(KhStatus::Rejected, v.to_string()),
        }
    })
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn kh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
