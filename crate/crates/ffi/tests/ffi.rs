use std::ffi::{CStr, CString};
use std::ptr;

use covering::exact::{rat, Rational, SymMatrix};
use covering::maxdet::{identity_coordinates, invariant_subspace};
use covering_ffi::*;
use serde_json::Value;

unsafe fn take_json(s: *mut std::ffi::c_char) -> Value {
    assert!(!s.is_null());
    let v = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
    covering_string_free(s);
    v
}

unsafe fn last_error() -> String {
    let p = covering_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

fn q_json(q: &SymMatrix) -> CString {
    CString::new(serde_json::to_string(&q.to_strings()).unwrap()).unwrap()
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(covering_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(covering_e8_info_json(ptr::null(), &mut out), CoveringStatus::NullPointer);
        assert!(out.is_null());
        assert!(last_error().contains("handle"));
        assert_eq!(covering_rigidity_json(3, ptr::null_mut()), CoveringStatus::NullPointer);
        covering_e8_free(ptr::null_mut());
        covering_string_free(ptr::null_mut());
    }
}

#[test]
fn rigidity_json() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(covering_rigidity_json(1, &mut out), CoveringStatus::InvalidArgument);
        assert_eq!(covering_rigidity_json(8, &mut out), CoveringStatus::Ok);
        let v = take_json(out);
        assert_eq!(v["nullspace_dim"], 1);
        assert_eq!(v["basis_is_identity"], true);
    }
}

#[test]
fn leech_bound_json() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(covering_leech_new(&mut h), CoveringStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(covering_leech_bound_json(h, &mut out), CoveringStatus::Ok);
        let v = take_json(out);
        assert_eq!(v["dimension"], 24);
        assert_eq!(v["tight"], true);
        covering_leech_free(h);
    }
}

#[test]
fn e8_problem_and_certificates() {
    unsafe {
        let mut e8 = ptr::null_mut();
        assert_eq!(covering_e8_new(&mut e8), CoveringStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(covering_e8_info_json(e8, &mut out), CoveringStatus::Ok);
        let info = take_json(out);
        assert_eq!(info["shell2"], 240);
        assert_eq!(info["shell4"], 2160);

        let mut p = ptr::null_mut();
        let bad_name = CString::new("I7").unwrap();
        assert_ne!(covering_problem_new(e8, bad_name.as_ptr(), &mut p), CoveringStatus::Ok);
        assert!(p.is_null());
        let name = CString::new("I1").unwrap();
        assert_eq!(covering_problem_new(e8, name.as_ptr(), &mut p), CoveringStatus::Ok);

        // the identity form certifies with density between the two thresholds
        let id = q_json(&SymMatrix::identity(8));
        let t = CString::new("4.0587").unwrap();
        assert_eq!(covering_certify_json(p, id.as_ptr(), t.as_ptr(), &mut out), CoveringStatus::Ok);
        let cert = take_json(out);
        assert_eq!(cert["mu"], "1");
        assert_eq!(cert["comparison"]["verdict"], "greater");

        // a step out of the feasible cone is rejected
        let sub = invariant_subspace();
        let id4 = identity_coordinates();
        let witness = [rat(7, 8), rat(0, 1), rat(9, 8), rat(-1, 28)];
        let bad: [Rational; 4] = std::array::from_fn(|k| &id4[k] - (&witness[k] - &id4[k]) * rat(1, 1000));
        let bad_q = q_json(&sub.embed(&bad));
        assert_eq!(covering_certify_json(p, bad_q.as_ptr(), t.as_ptr(), &mut out), CoveringStatus::Rejected);
        assert!(last_error().contains("type3"), "{}", last_error());

        let garbage = CString::new("[[1]]").unwrap();
        assert_ne!(covering_certify_json(p, garbage.as_ptr(), t.as_ptr(), &mut out), CoveringStatus::Ok);

        covering_problem_free(p);
        covering_e8_free(e8);
    }
}
