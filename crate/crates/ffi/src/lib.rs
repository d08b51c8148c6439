//! C interface to `higher_dirac`.
//!
//! Every function returns an [`HdStatus`]; on failure a message is kept per
//! thread and can be read with [`hd_last_error_message`]. Analyses live
//! behind an opaque [`HdAnalysis`] handle released with [`hd_analysis_free`].
//! Panics never cross the boundary; they are reported as `HD_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use higher_dirac::depth::{DepthError, Target};
use higher_dirac::fuzz::run_fuzz;
use higher_dirac::report::Report;
use higher_dirac::triangle::triangle_criterion;

/// Result codes. The first four match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HdStatus {
    Ok = 0,
    CheckFailed = 1,
    ShallowTruncation = 2,
    InputError = 3,
    NullPointer = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// An analyzed module: its report and the report rendered as JSON.
pub struct HdAnalysis {
    report: Report,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: HdStatus, msg: &str) -> HdStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> HdStatus) -> HdStatus {
    set_error("");
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(HdStatus::Panic, "internal panic"))
}

fn from_error(e: &DepthError) -> HdStatus {
    match e {
        DepthError::Shallow { suggested: Some(d), .. } => {
            fail(HdStatus::ShallowTruncation, &format!("{e}; depth {d} is sufficient"))
        }
        DepthError::Shallow { .. } => fail(HdStatus::ShallowTruncation, &e.to_string()),
        DepthError::Input(_) => fail(HdStatus::InputError, &e.to_string()),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, HdStatus> {
    if s.is_null() {
        return Err(fail(HdStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(HdStatus::InputError, "argument is not valid UTF-8"))
}

unsafe fn analysis<'a>(h: *const HdAnalysis) -> Result<&'a HdAnalysis, HdStatus> {
    h.as_ref().ok_or_else(|| fail(HdStatus::NullPointer, "null analysis handle"))
}

unsafe fn store(target: Target, depth: usize, out: *mut *mut HdAnalysis) -> HdStatus {
    if out.is_null() {
        return fail(HdStatus::NullPointer, "null output pointer");
    }
    *out = ptr::null_mut();
    match target.stable_report(depth, None) {
        Ok(report) => {
            let json = CString::new(report.to_json()).expect("JSON has no interior NUL");
            *out = Box::into_raw(Box::new(HdAnalysis { report, json }));
            HdStatus::Ok
        }
        Err(e) => from_error(&e),
    }
}

unsafe fn copy_out(values: &[usize], buf: *mut usize, cap: usize, len: *mut usize) -> HdStatus {
    if len.is_null() {
        return fail(HdStatus::NullPointer, "null length pointer");
    }
    *len = values.len();
    if values.len() > cap {
        return fail(HdStatus::BufferTooSmall, &format!("need room for {} values", values.len()));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return fail(HdStatus::NullPointer, "null buffer");
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    HdStatus::Ok
}

/// Message for the last failed call on this thread, or `""`. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Analyzes a builtin module (`P`, `verma:<λ>`, `finite:<n>`, `trivial`,
/// `sum:(…)`) or a module spec file, truncated at `depth`. Builtins are
/// also compared against a deeper truncation; a depth that changes the
/// result gives `HD_STATUS_SHALLOW_TRUNCATION`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_analyze_module(name: *const c_char, depth: usize, out: *mut *mut HdAnalysis) -> HdStatus {
    guard(|| match read_str(name) {
        Ok(name) => store(Target::Module(name.into()), depth, out),
        Err(s) => s,
    })
}

/// Analyzes the middle term of a builtin sequence (`P`, `infchar`) or a
/// sequence spec file, including additivity, six-term and triangle checks.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_analyze_ses(name: *const c_char, depth: usize, out: *mut *mut HdAnalysis) -> HdStatus {
    guard(|| match read_str(name) {
        Ok(name) => store(Target::Ses(name.into()), depth, out),
        Err(s) => s,
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must come from `hd_analyze_*` and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn hd_analysis_free(h: *mut HdAnalysis) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// The report as JSON, owned by the handle.
///
/// # Safety
/// `h` must be a live handle. Returns null for a null handle.
#[no_mangle]
pub unsafe extern "C" fn hd_analysis_report_json(h: *const HdAnalysis) -> *const c_char {
    match analysis(h) {
        Ok(a) => a.json.as_ptr(),
        Err(_) => ptr::null(),
    }
}

/// `HD_STATUS_OK` when every check in the report passed, else
/// `HD_STATUS_CHECK_FAILED`.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hd_analysis_checks(h: *const HdAnalysis) -> HdStatus {
    guard(|| match analysis(h) {
        Ok(a) if a.report.passed() => HdStatus::Ok,
        Ok(_) => fail(HdStatus::CheckFailed, "a check failed; see the report"),
        Err(s) => s,
    })
}

/// Jordan block sizes of the generalized 0-eigenspace, largest first.
/// `*len` is always set to the number of sizes; with `cap` too small the
/// call returns `HD_STATUS_BUFFER_TOO_SMALL` and writes nothing.
///
/// # Safety
/// `h` must be a live handle, `buf` valid for `cap` writes, `len` valid.
#[no_mangle]
pub unsafe extern "C" fn hd_analysis_jordan_sizes(
    h: *const HdAnalysis,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> HdStatus {
    guard(|| match analysis(h) {
        Ok(a) => copy_out(&a.report.jordan_sizes, buf, cap, len),
        Err(s) => s,
    })
}

/// `dim H^k` for `k = 0, 1, …` up to the last nonzero degree.
///
/// # Safety
/// As for [`hd_analysis_jordan_sizes`].
#[no_mangle]
pub unsafe extern "C" fn hd_analysis_cohomology_dims(
    h: *const HdAnalysis,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> HdStatus {
    guard(|| match analysis(h) {
        Ok(a) => {
            let top = a.report.cohomology.iter().map(|c| c.degree + 1).max().unwrap_or(0);
            let mut dims = vec![0; top];
            for c in &a.report.cohomology {
                dims[c.degree] += 1;
            }
            copy_out(&dims, buf, cap, len)
        }
        Err(s) => s,
    })
}

/// Whether an exact triangle with side dimensions `h1, h2, h3` exists.
/// When it does and `a` is not null, writes the three multiplicities.
///
/// # Safety
/// `a` must be null or valid for three writes.
#[no_mangle]
pub unsafe extern "C" fn hd_triangle_criterion(h1: usize, h2: usize, h3: usize, a: *mut usize) -> bool {
    let cert = triangle_criterion(h1, h2, h3);
    match (cert.a, a.is_null()) {
        (Some(v), false) => {
            ptr::copy_nonoverlapping(v.as_ptr(), a, 3);
            true
        }
        (found, _) => found.is_some(),
    }
}

/// Runs the property fuzz suite and writes the number of counterexamples.
///
/// # Safety
/// `counterexamples` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hd_fuzz(seed: u64, cases: usize, counterexamples: *mut usize) -> HdStatus {
    guard(|| {
        if counterexamples.is_null() {
            return fail(HdStatus::NullPointer, "null output pointer");
        }
        let s = run_fuzz(seed, cases);
        *counterexamples = s.counterexamples.len();
        if s.counterexamples.is_empty() {
            HdStatus::Ok
        } else {
            fail(HdStatus::CheckFailed, &format!("{} counterexamples", s.counterexamples.len()))
        }
    })
}
