//! C ABI over the covering library. Handles are opaque; every call returns a
//! `CoveringStatus`, and on failure `covering_last_error()` describes it.
//! JSON results are returned as heap strings released with
//! `covering_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use covering::e8::{self, DiagonalClass, E8Model, GOrbit, PeriodicTriangulation};
use covering::exact::SymMatrix;
use covering::leech::{self, LeechModel};
use covering::maxdet::{self, OptimizationProblem};
use covering::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoveringStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A verification step failed (regulator violated, form not positive definite, ...).
    Rejected = 3,
    /// Corrupt or inconsistent data.
    DataError = 4,
    /// The optimizer did not converge or a computation failed.
    ComputationFailed = 5,
    Panic = 6,
}

/// E8 model with its diagonal classes and G-orbits.
pub struct CoveringE8 {
    model: E8Model,
    classes: Vec<DiagonalClass>,
    orbits: Vec<GOrbit>,
}

/// Optimization problem of one triangulation (regulators and simplices).
pub struct CoveringProblem {
    problem: OptimizationProblem,
}

pub struct CoveringLeech {
    model: LeechModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CoveringStatus {
    match e {
        Error::Rejected(_) | Error::NotPositiveDefinite | Error::InfeasibleTriangulation => CoveringStatus::Rejected,
        Error::DataIntegrity(_) | Error::Io(_) => CoveringStatus::DataError,
        Error::NonConvergence { .. } | Error::RationalizationFailed { .. } | Error::Singular | Error::DegenerateSimplex => {
            CoveringStatus::ComputationFailed
        }
        _ => CoveringStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (CoveringStatus, String)>) -> CoveringStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CoveringStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            CoveringStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (CoveringStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (CoveringStatus, String) {
    (CoveringStatus::NullPointer, format!("{name} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, (CoveringStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (CoveringStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

unsafe fn write_json(out: *mut *mut c_char, v: &impl serde::Serialize) -> Result<(), (CoveringStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = serde_json::to_string(v).map_err(|e| (CoveringStatus::ComputationFailed, e.to_string()))?;
    let c = CString::new(s).map_err(|e| (CoveringStatus::ComputationFailed, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, v: T) -> Result<(), (CoveringStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn covering_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn covering_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn covering_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn covering_e8_new(out: *mut *mut CoveringE8) -> CoveringStatus {
    guard(|| {
        let model = e8::build_model();
        let classes = e8::diagonal_classes(&model);
        let orbits = e8::g_orbits(&model);
        write_handle(out, CoveringE8 { model, classes, orbits })
    })
}

/// # Safety
/// `h` must be NULL or a handle from `covering_e8_new`, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn covering_e8_free(h: *mut CoveringE8) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Shell, class and simplex counts as JSON.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn covering_e8_info_json(h: *const CoveringE8, out: *mut *mut c_char) -> CoveringStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let info = serde_json::json!({
            "shell2": h.model.roots.len(),
            "shell4": h.model.shell4.len(),
            "classes": h.classes.len(),
            "orbits": h.orbits.len(),
            "simplex_centers": h.model.simplex_centers.len(),
        });
        write_json(out, &info)
    })
}

/// Builds the optimization problem of triangulation `name` ("I1" or "I2").
///
/// # Safety
/// `h` must be a live handle, `name` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covering_problem_new(h: *const CoveringE8, name: *const c_char, out: *mut *mut CoveringProblem) -> CoveringStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let name = read_str(name, "name")?;
        let t = PeriodicTriangulation::named(name, &h.classes, &h.orbits).map_err(lib_err)?;
        let problem = OptimizationProblem::build(&h.model, &t);
        write_handle(out, CoveringProblem { problem })
    })
}

/// # Safety
/// `p` must be NULL or a handle from `covering_problem_new`, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn covering_problem_free(p: *mut CoveringProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Float optimum and its rationalization (denominator bound given as a
/// decimal integer string) as JSON with fields `optimum`, `coordinates`, `q`.
///
/// # Safety
/// `p` must be a live handle, `bound` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covering_optimize_json(p: *const CoveringProblem, bound: *const c_char, out: *mut *mut c_char) -> CoveringStatus {
    guard(|| {
        let p = &p.as_ref().ok_or_else(|| null("problem"))?.problem;
        let bound: num_bigint::BigInt = read_str(bound, "bound")?
            .parse()
            .map_err(|_| (CoveringStatus::InvalidArgument, "bound is not an integer".to_string()))?;
        let opt = maxdet::optimize(p).map_err(lib_err)?;
        let r = maxdet::rationalize(p, &opt.p, &opt.active_regulators, &bound).map_err(lib_err)?;
        let body = serde_json::json!({
            "optimum": opt,
            "coordinates": r.p.iter().map(covering::exact::format_rational).collect::<Vec<_>>(),
            "q": r.q.to_strings(),
        });
        write_json(out, &body)
    })
}

/// Certifies the form given as a JSON matrix of rational strings against
/// the problem's triangulation, comparing the density with `threshold`.
/// A violated regulator yields `COVERING_STATUS_REJECTED`.
///
/// # Safety
/// `p` must be a live handle, the strings NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn covering_certify_json(
    p: *const CoveringProblem,
    q_json: *const c_char,
    threshold: *const c_char,
    out: *mut *mut c_char,
) -> CoveringStatus {
    guard(|| {
        let p = &p.as_ref().ok_or_else(|| null("problem"))?.problem;
        let text = read_str(q_json, "q_json")?;
        let threshold = read_str(threshold, "threshold")?;
        let rows: Vec<Vec<String>> = serde_json::from_str(text).map_err(|e| (CoveringStatus::InvalidArgument, e.to_string()))?;
        let q = SymMatrix::from_strings(&rows).map_err(lib_err)?;
        let cert = maxdet::certify(&q, p, threshold).map_err(lib_err)?;
        write_json(out, &cert)
    })
}

/// Loads and validates the Leech lattice generator.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn covering_leech_new(out: *mut *mut CoveringLeech) -> CoveringStatus {
    guard(|| {
        let model = leech::build_leech().map_err(lib_err)?;
        write_handle(out, CoveringLeech { model })
    })
}

/// # Safety
/// `h` must be NULL or a handle from `covering_leech_new`, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn covering_leech_free(h: *mut CoveringLeech) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Moment-form lower bound report as JSON.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn covering_leech_bound_json(h: *const CoveringLeech, out: *mut *mut c_char) -> CoveringStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        let r = leech::lower_bound_certificate(&h.model).map_err(lib_err)?;
        write_json(out, &r)
    })
}

/// Rigidity report for dimension `dim >= 2` as JSON.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn covering_rigidity_json(dim: u32, out: *mut *mut c_char) -> CoveringStatus {
    guard(|| {
        if dim < 2 {
            return Err((CoveringStatus::InvalidArgument, "dim must be at least 2".into()));
        }
        let r = covering::rigidity::solution_space(&covering::rigidity::build_system(dim as usize));
        write_json(out, &r)
    })
}
