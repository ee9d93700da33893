//! C ABI round trips through the Rust declarations.

use std::ffi::CStr;
use std::ptr;

use hypack_ffi::*;

#[test]
fn solve_vor_closed_form() {
    let mut r = 0.0;
    let st = unsafe { hypack_solve_vor(-2, 0, 1, &mut r) };
    assert_eq!(st, HypackStatus::Ok);
    let expected = (0.5 / (std::f64::consts::PI / 18.0).sin()).acosh();
    assert!((r - expected).abs() < 1e-10 * expected);
}

#[test]
fn bounds_record() {
    let mut b = HypackBounds {
        r_naive: 0.0,
        r_boroczky: 0.0,
        r_vor: 0.0,
        density: 0.0,
        i_num: 0,
        i_den: 0,
        j_num: 0,
        j_den: 0,
        attainability: HypackAttainability::Unknown,
    };
    assert_eq!(unsafe { hypack_bounds(-1, 1, 2, &mut b) }, HypackStatus::Ok);
    assert_eq!((b.i_num, b.i_den, b.j_num, b.j_den), (15, 2, 1, 1));
    assert!(b.r_vor < b.r_boroczky && b.r_boroczky < b.r_naive);
    assert!(b.density > 0.0 && b.density < 1.0);
    assert_eq!(b.attainability, HypackAttainability::NecessaryConditionFails);
    assert_eq!(unsafe { hypack_bounds(1, 0, 1, &mut b) }, HypackStatus::InvalidArgument);
}

#[test]
fn null_pointers_rejected() {
    unsafe {
        assert_eq!(hypack_solve_vor(-2, 0, 1, ptr::null_mut()), HypackStatus::NullPointer);
        assert_eq!(
            hypack_surface_construct(-2, 0, 1, true, ptr::null_mut()),
            HypackStatus::NullPointer
        );
        let mut n = 0usize;
        assert_eq!(
            hypack_surface_triangle_count(ptr::null(), &mut n),
            HypackStatus::NullPointer
        );
        hypack_surface_free(ptr::null_mut());
        hypack_string_free(ptr::null_mut());
    }
}

#[test]
fn surface_lifecycle() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(hypack_surface_construct(-2, 2, 2, true, &mut s), HypackStatus::Ok);
        assert!(!s.is_null());
        let (mut t, mut v) = (0usize, 0usize);
        assert_eq!(hypack_surface_triangle_count(s, &mut t), HypackStatus::Ok);
        assert_eq!(hypack_surface_vertex_count(s, &mut v), HypackStatus::Ok);
        assert_eq!((t, v), (8, 4));
        let mut passed = false;
        assert_eq!(hypack_surface_verify(s, &mut passed), HypackStatus::Ok);
        assert!(passed);
        let mut text = ptr::null_mut();
        assert_eq!(hypack_surface_to_json(s, &mut text), HypackStatus::Ok);
        let json = CStr::from_ptr(text).to_str().unwrap();
        assert!(json.contains("\"schema_version\": \"1\""));
        hypack_string_free(text);
        hypack_surface_free(s);
    }
}

#[test]
fn construct_errors() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(
            hypack_surface_construct(-2, 0, 5, true, &mut s),
            HypackStatus::Inadmissible
        );
        assert_eq!(
            hypack_surface_construct(-1, 2, 2, false, &mut s),
            HypackStatus::Unrealizable
        );
        assert!(s.is_null());
        let msg = CStr::from_ptr(hypack_status_message(HypackStatus::Inadmissible));
        assert_eq!(msg.to_str().unwrap(), "inadmissible request");
    }
}

#[test]
fn strip_lengths() {
    let mut x = 0.0;
    unsafe {
        assert_eq!(hypack_strip_nonsep_length(0.2, 1.0, 0.5, &mut x), HypackStatus::Ok);
        assert!((x - 0.773).abs() < 1e-3);
        assert_eq!(hypack_strip_sep_length(0.1, 0.1, 1.0, 0.5, &mut x), HypackStatus::Ok);
        assert!(x > 0.4);
        assert_eq!(
            hypack_strip_nonsep_length(-1.0, 1.0, 0.5, &mut x),
            HypackStatus::InvalidArgument
        );
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hypack.h")).unwrap();
    for name in [
        "hypack_status_message",
        "hypack_solve_vor",
        "hypack_bounds",
        "hypack_surface_construct",
        "hypack_surface_free",
        "hypack_surface_triangle_count",
        "hypack_surface_vertex_count",
        "hypack_surface_verify",
        "hypack_surface_to_json",
        "hypack_string_free",
        "hypack_strip_nonsep_length",
        "hypack_strip_sep_length",
        "typedef struct HypackSurface HypackSurface;",
        "HYPACK_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
