//! C ABI for hypack.
//!
//! Every function returns a [`HypackStatus`] and writes results through out
//! pointers. Surfaces are opaque [`HypackSurface`] handles released with
//! [`hypack_surface_free`]; strings are released with [`hypack_string_free`].

use std::collections::BTreeMap;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hypack::assembler::{certify, marked_surface, AssemblyError, AssemblyRequest};
use hypack::bounds::{report, Attainability, SurfaceSignature};
use hypack::cli::ComplexDocument;
use hypack::complex::TriangulatedComplex;
use hypack::geometry::{density, evaluate};
use hypack::strip::{nonsep_length, sep_length, NonSepParams, SepParams};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypackStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Inadmissible = 3,
    Unrealizable = 4,
    Internal = 5,
}

/// Attainability of the packing bound.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypackAttainability {
    AttainedByConstruction = 0,
    NotAttained = 1,
    NecessaryConditionFails = 2,
    Unknown = 3,
}

/// Bounds for one `(chi, n, k)`. Valences are fractions `num/den`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypackBounds {
    pub r_naive: f64,
    pub r_boroczky: f64,
    pub r_vor: f64,
    pub density: f64,
    pub i_num: i64,
    pub i_den: i64,
    pub j_num: i64,
    pub j_den: i64,
    pub attainability: HypackAttainability,
}

/// Opaque surface handle.
pub struct HypackSurface {
    complex: TriangulatedComplex,
    request: AssemblyRequest,
}

fn guard(f: impl FnOnce() -> HypackStatus) -> HypackStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(HypackStatus::Internal)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn hypack_status_message(status: HypackStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        HypackStatus::Ok => b"ok\0",
        HypackStatus::NullPointer => b"null pointer argument\0",
        HypackStatus::InvalidArgument => b"invalid argument\0",
        HypackStatus::Inadmissible => b"inadmissible request\0",
        HypackStatus::Unrealizable => b"no such triangulation\0",
        HypackStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}

/// Packing-radius bound `r_vor` for `(chi, n, k)`.
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn hypack_solve_vor(chi: i64, n: i64, k: i64, out: *mut f64) -> HypackStatus {
    guard(|| {
        if out.is_null() {
            return HypackStatus::NullPointer;
        }
        let Ok(sig) = SurfaceSignature::new(chi, n) else {
            return HypackStatus::InvalidArgument;
        };
        match hypack::bounds::solve_vor(sig, k) {
            Ok(r) => {
                *out = r;
                HypackStatus::Ok
            }
            Err(_) => HypackStatus::InvalidArgument,
        }
    })
}

/// Full bound report for `(chi, n, k)`.
///
/// # Safety
/// `out` must be null or valid for writing one `HypackBounds`.
#[no_mangle]
pub unsafe extern "C" fn hypack_bounds(chi: i64, n: i64, k: i64, out: *mut HypackBounds) -> HypackStatus {
    guard(|| {
        if out.is_null() {
            return HypackStatus::NullPointer;
        }
        let Ok(sig) = SurfaceSignature::new(chi, n) else {
            return HypackStatus::InvalidArgument;
        };
        let (Ok(rep), Ok(d)) = (report(sig, k), density(sig, k)) else {
            return HypackStatus::InvalidArgument;
        };
        *out = HypackBounds {
            r_naive: rep.r_naive,
            r_boroczky: rep.r_boroczky,
            r_vor: rep.r_vor,
            density: d,
            i_num: *rep.valences.i.numer(),
            i_den: *rep.valences.i.denom(),
            j_num: *rep.valences.j.numer(),
            j_den: *rep.valences.j.denom(),
            attainability: match rep.attainability {
                Attainability::AttainedByConstruction => HypackAttainability::AttainedByConstruction,
                Attainability::NotAttained => HypackAttainability::NotAttained,
                Attainability::NecessaryConditionFails => HypackAttainability::NecessaryConditionFails,
                Attainability::Unknown => HypackAttainability::Unknown,
            },
        };
        HypackStatus::Ok
    })
}

/// Builds the extremal surface for `(chi, n, k, orientable)`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer. On success the
/// handle must be released with `hypack_surface_free`.
#[no_mangle]
pub unsafe extern "C" fn hypack_surface_construct(
    chi: i64,
    n: i64,
    k: i64,
    orientable: bool,
    out: *mut *mut HypackSurface,
) -> HypackStatus {
    guard(|| {
        if out.is_null() {
            return HypackStatus::NullPointer;
        }
        let request = AssemblyRequest::new(chi, n, k, orientable);
        match marked_surface(&request) {
            Ok((complex, _)) => {
                *out = Box::into_raw(Box::new(HypackSurface { complex, request }));
                HypackStatus::Ok
            }
            Err(AssemblyError::Inadmissible(_)) => HypackStatus::Inadmissible,
            Err(AssemblyError::Unrealizable(_)) => HypackStatus::Unrealizable,
            Err(_) => HypackStatus::Internal,
        }
    })
}

/// Releases a surface handle. Null is ignored.
///
/// # Safety
/// `surface` must be null or a handle from `hypack_surface_construct` that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn hypack_surface_free(surface: *mut HypackSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

/// Number of triangles of a surface.
///
/// # Safety
/// `surface` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hypack_surface_triangle_count(surface: *const HypackSurface, out: *mut usize) -> HypackStatus {
    guard(|| {
        let (Some(s), false) = (surface.as_ref(), out.is_null()) else {
            return HypackStatus::NullPointer;
        };
        *out = s.complex.triangle_count();
        HypackStatus::Ok
    })
}

/// Number of vertices of a surface, marked ones included.
///
/// # Safety
/// `surface` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hypack_surface_vertex_count(surface: *const HypackSurface, out: *mut usize) -> HypackStatus {
    guard(|| {
        let (Some(s), false) = (surface.as_ref(), out.is_null()) else {
            return HypackStatus::NullPointer;
        };
        match s.complex.vertex_classes() {
            Ok(v) => {
                *out = v.len();
                HypackStatus::Ok
            }
            Err(_) => HypackStatus::Internal,
        }
    })
}

/// Rechecks the combinatorial and geometric certificates of a surface.
///
/// # Safety
/// `surface` must be null or a live handle; `passed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hypack_surface_verify(surface: *const HypackSurface, passed: *mut bool) -> HypackStatus {
    guard(|| {
        let (Some(s), false) = (surface.as_ref(), passed.is_null()) else {
            return HypackStatus::NullPointer;
        };
        let req = s.request;
        let Ok(sig) = SurfaceSignature::new(req.chi, req.n) else {
            return HypackStatus::Internal;
        };
        match (certify(&s.complex, &req), evaluate(&s.complex, sig, req.k)) {
            (Ok(a), Ok(g)) => {
                *passed = a.passed() && g.passed();
                HypackStatus::Ok
            }
            _ => HypackStatus::Internal,
        }
    })
}

/// Serializes a surface as a schema-1 document. The string must be
/// released with `hypack_string_free`.
///
/// # Safety
/// `surface` must be null or a live handle; `out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn hypack_surface_to_json(surface: *const HypackSurface, out: *mut *mut c_char) -> HypackStatus {
    guard(|| {
        let (Some(s), false) = (surface.as_ref(), out.is_null()) else {
            return HypackStatus::NullPointer;
        };
        let text = ComplexDocument::from_complex(&s.complex, BTreeMap::new()).to_json();
        match CString::new(text) {
            Ok(c) => {
                *out = c.into_raw();
                HypackStatus::Ok
            }
            Err(_) => HypackStatus::Internal,
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn hypack_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Length of the geodesic crossing a non-separating strip.
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn hypack_strip_nonsep_length(delta: f64, h: f64, eps: f64, out: *mut f64) -> HypackStatus {
    guard(|| {
        if out.is_null() {
            return HypackStatus::NullPointer;
        }
        match nonsep_length(&NonSepParams { delta, h, eps }) {
            Ok(x) => {
                *out = x;
                HypackStatus::Ok
            }
            Err(_) => HypackStatus::InvalidArgument,
        }
    })
}

/// Length of the geodesic crossing a separating strip.
///
/// # Safety
/// `out` must be null or valid for writing one `double`.
#[no_mangle]
pub unsafe extern "C" fn hypack_strip_sep_length(a: f64, b: f64, h: f64, eps: f64, out: *mut f64) -> HypackStatus {
    guard(|| {
        if out.is_null() {
            return HypackStatus::NullPointer;
        }
        match sep_length(&SepParams { a, b, h, eps }) {
            Ok(x) => {
                *out = x;
                HypackStatus::Ok
            }
            Err(_) => HypackStatus::InvalidArgument,
        }
    })
}
