use std::ffi::{c_char, CStr};
use std::f64::consts::PI;
use std::ptr;

use fundgap_ffi::*;

fn params(n: u32, k: f64, d: f64) -> *mut FgParams {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { fg_params_new(n, k, d, &mut p) }, FgStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    let mut needed = 0usize;
    unsafe { fg_last_error(ptr::null_mut(), 0, &mut needed) };
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(unsafe { fg_last_error(buf.as_mut_ptr(), buf.len(), ptr::null_mut()) }, FgStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(fg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn invalid_params_report_domain() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { fg_params_new(2, 1.0, 4.0, &mut p) }, FgStatus::Domain);
    assert!(p.is_null());
    assert!(last_error().contains("pi^2"));
    assert_eq!(unsafe { fg_params_new(0, 0.0, 1.0, &mut p) }, FgStatus::Domain);
    assert_eq!(unsafe { fg_params_new(2, 0.0, 1.0, ptr::null_mut()) }, FgStatus::InvalidArgument);
}

#[test]
fn flat_gap_is_three_pi_squared() {
    let p = params(3, 0.0, 2.0);
    let mut g = FgGap::default();
    assert_eq!(unsafe { fg_gap(p, &mut g) }, FgStatus::Ok);
    assert!((g.gap - 3.0 * PI * PI / 4.0).abs() < 1e-9);
    assert!(g.excess.abs() < 1e-9);
    unsafe { fg_params_free(p) };
}

#[test]
fn methods_agree() {
    let p = params(2, 0.5, 1.0);
    let mut a = FgEigen::default();
    let mut b = FgEigen::default();
    for i in 1..=2 {
        assert_eq!(unsafe { fg_eigenvalue(p, i, FgMethod::Shooting as u32, &mut a) }, FgStatus::Ok);
        assert_eq!(unsafe { fg_eigenvalue(p, i, FgMethod::FiniteDifference as u32, &mut b) }, FgStatus::Ok);
        assert!(((a.eigenvalue - b.eigenvalue) / a.eigenvalue).abs() < 1e-7);
    }
    assert_eq!(unsafe { fg_eigenvalue(p, 3, 0, &mut a) }, FgStatus::InvalidArgument);
    assert_eq!(unsafe { fg_eigenvalue(p, 1, 7, &mut a) }, FgStatus::InvalidArgument);
    assert_eq!(unsafe { fg_eigenvalue(p, 1, 0, ptr::null_mut()) }, FgStatus::InvalidArgument);
    assert_eq!(unsafe { fg_eigenvalue(ptr::null(), 1, 0, &mut a) }, FgStatus::InvalidArgument);
    unsafe { fg_params_free(p) };
}

#[test]
fn robin_constant_in_range() {
    let p = params(2, 0.5, 1.0);
    let mut c = 0.0;
    assert_eq!(unsafe { fg_robin_constant(p, 10.0, &mut c) }, FgStatus::Ok);
    assert!(c < 0.0 && c > -PI * PI);
    assert_eq!(unsafe { fg_robin_constant(p, -1.0, &mut c) }, FgStatus::Domain);
    unsafe { fg_params_free(p) };
}

#[test]
fn bounds_bracket_eigenvalues() {
    let p = params(4, 1.0, 2.0);
    for i in 1..=2 {
        let mut b = FgBounds::default();
        let mut e = FgEigen::default();
        assert_eq!(unsafe { fg_bounds(p, i, &mut b) }, FgStatus::Ok);
        assert_eq!(unsafe { fg_eigenvalue(p, i, 0, &mut e) }, FgStatus::Ok);
        assert!(b.lower <= e.eigenvalue && e.eigenvalue <= b.upper);
    }
    unsafe { fg_params_free(p) };
    let flat = params(4, 0.0, 2.0);
    let mut b = FgBounds::default();
    assert_eq!(unsafe { fg_bounds(flat, 1, &mut b) }, FgStatus::Domain);
    unsafe { fg_params_free(flat) };
}

#[test]
fn series_matches_eigenvalues_for_small_curvature() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fg_series_new(3, &mut s) }, FgStatus::Ok);
    assert_eq!(unsafe { fg_series_order(s) }, 3);
    let p = params(5, 0.01, 1.0);
    let mut g = FgGap::default();
    assert_eq!(unsafe { fg_gap(p, &mut g) }, FgStatus::Ok);
    let (mut l1, mut l2, mut gap) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(fg_series_eval(s, FgSeriesKind::First as u32, p, 3, &mut l1), FgStatus::Ok);
        assert_eq!(fg_series_eval(s, FgSeriesKind::Second as u32, p, 3, &mut l2), FgStatus::Ok);
        assert_eq!(fg_series_eval(s, FgSeriesKind::Gap as u32, p, 3, &mut gap), FgStatus::Ok);
    }
    assert!((l1 - g.lambda1).abs() < 1e-8);
    assert!((l2 - g.lambda2).abs() < 1e-8);
    assert!((gap - (l2 - l1)).abs() < 1e-12);
    assert_eq!(unsafe { fg_series_eval(s, 1, p, 4, &mut l1) }, FgStatus::InvalidArgument);
    assert_eq!(unsafe { fg_series_eval(s, 9, p, 1, &mut l1) }, FgStatus::InvalidArgument);
    unsafe {
        fg_params_free(p);
        fg_series_free(s);
    }
}

#[test]
fn series_coefficient_text_and_value() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { fg_series_new(2, &mut s) }, FgStatus::Ok);
    let mut needed = 0usize;
    let mut small = [0 as c_char; 2];
    let st = unsafe { fg_series_coefficient(s, 1, 0, small.as_mut_ptr(), small.len(), &mut needed) };
    assert_eq!(st, FgStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(unsafe { fg_series_coefficient(s, 1, 0, buf.as_mut_ptr(), buf.len(), &mut needed) }, FgStatus::Ok);
    let text = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned();
    assert!(text.contains("π"), "{text}");
    // κ¹ coefficient of the gap vanishes; κ⁰ is 3π².
    let mut v = 1.0;
    assert_eq!(unsafe { fg_series_coefficient_at(s, 3, 1, 4, &mut v) }, FgStatus::Ok);
    assert_eq!(v, 0.0);
    assert_eq!(unsafe { fg_series_coefficient_at(s, 3, 0, 4, &mut v) }, FgStatus::Ok);
    assert!((v - 3.0 * PI * PI).abs() < 1e-12);
    unsafe { fg_series_free(s) };
    assert_eq!(unsafe { fg_series_new(0, &mut s) }, FgStatus::InvalidArgument);
    assert!(s.is_null());
}

#[test]
fn flow_reaches_stationary_state() {
    let p = params(2, 0.5, 1.0);
    let mut c = 0.0;
    assert_eq!(unsafe { fg_robin_constant(p, 10.0, &mut c) }, FgStatus::Ok);
    let s = 2.0 * (c + PI * PI).abs();
    let mut r = FgFlowResult::default();
    assert_eq!(unsafe { fg_flow(p, 10.0, s, 1e-6, 0, &mut r) }, FgStatus::Ok);
    assert!(r.distance <= 1e-6 && r.steps > 0 && r.t > 0.0);
    unsafe { fg_params_free(p) };
}

#[test]
fn errors_are_per_thread() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { fg_params_new(2, 0.0, -1.0, &mut p) }, FgStatus::Domain);
    let here = last_error();
    std::thread::spawn(|| assert_eq!(last_error(), "")).join().unwrap();
    assert_eq!(last_error(), here);
}

#[test]
fn free_accepts_null() {
    unsafe {
        fg_params_free(ptr::null_mut());
        fg_series_free(ptr::null_mut());
        assert_eq!(fg_series_order(ptr::null()), 0);
    }
}
