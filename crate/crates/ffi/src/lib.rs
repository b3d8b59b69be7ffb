//! C ABI for the conic-dsrg library.
//!
//! Conventions: every object crosses the boundary as an opaque pointer with
//! a dedicated `*_free` function; every fallible call returns a [`CdsStatus`]
//! and writes its result through out-pointers, which are left untouched on
//! failure; a thread-local message describing the most recent failure is
//! available from [`cds_last_error`]. Panics are caught at the boundary and
//! reported as `CDS_INTERNAL_ERROR`.
//!
//! The matching declarations live in `include/conic_dsrg.h`, which is
//! maintained by hand and kept in sync by a unit test.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conic_dsrg::construction::{build_gamma, ConstructionContext, OrbitChoice};
use conic_dsrg::digraph::{read_matrix01, verify_dsrg, write_matrix01, Digraph, DsrgParams};
use conic_dsrg::geometry::VertexSet;
use conic_dsrg::gf2e::FieldSpec;
use conic_dsrg::{iso, search};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum CdsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    ParseError = 3,
    BudgetExceeded = 4,
    InternalError = 5,
}

/// Opaque handle for a binary field GF(2^e).
pub struct CdsField(FieldSpec);

/// Opaque handle for a loopless digraph.
pub struct CdsDigraph(Digraph);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).expect("NUL bytes stripped above");
    });
}

fn fail(status: CdsStatus, message: impl Into<String>) -> CdsStatus {
    set_error(message);
    status
}

/// Runs a closure, converting panics into `CDS_INTERNAL_ERROR`.
fn guarded(f: impl FnOnce() -> CdsStatus) -> CdsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            fail(CdsStatus::InternalError, format!("internal panic: {message}"))
        }
    }
}

/// # Safety
/// `text` must be a valid NUL-terminated string or null.
unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, CdsStatus> {
    if text.is_null() {
        return Err(fail(CdsStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(text)
        .to_str()
        .map_err(|_| fail(CdsStatus::ParseError, "argument is not valid UTF-8"))
}

fn write_out<T>(out: *mut T, value: T) -> CdsStatus {
    if out.is_null() {
        return fail(CdsStatus::NullArgument, "null out-pointer");
    }
    unsafe { ptr::write(out, value) };
    CdsStatus::Ok
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cds_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Message describing the most recent failure on this thread. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cds_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn cds_status_name(status: CdsStatus) -> *const c_char {
    let name: &'static str = match status {
        CdsStatus::Ok => "CDS_OK\0",
        CdsStatus::NullArgument => "CDS_NULL_ARGUMENT\0",
        CdsStatus::InvalidArgument => "CDS_INVALID_ARGUMENT\0",
        CdsStatus::ParseError => "CDS_PARSE_ERROR\0",
        CdsStatus::BudgetExceeded => "CDS_BUDGET_EXCEEDED\0",
        CdsStatus::InternalError => "CDS_INTERNAL_ERROR\0",
    };
    name.as_ptr().cast()
}

/// Parses a field spec string `e=<int>,mod=<hex>`.
///
/// # Safety
/// `spec` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cds_field_parse(spec: *const c_char, out: *mut *mut CdsField) -> CdsStatus {
    guarded(|| {
        let spec = match read_str(spec) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match spec.parse::<FieldSpec>() {
            Ok(field) => write_out(out, Box::into_raw(Box::new(CdsField(field)))),
            Err(e) => fail(CdsStatus::ParseError, e.to_string()),
        }
    })
}

/// Builds GF(2^e) with the built-in modulus for the exponent.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cds_field_default(exponent: u32, out: *mut *mut CdsField) -> CdsStatus {
    guarded(|| match FieldSpec::with_default_modulus(exponent) {
        Ok(field) => write_out(out, Box::into_raw(Box::new(CdsField(field)))),
        Err(e) => fail(CdsStatus::InvalidArgument, e.to_string()),
    })
}

/// Field order q = 2^e, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cds_field_order(field: *const CdsField) -> u32 {
    if field.is_null() {
        return 0;
    }
    (*field).0.order()
}

/// # Safety
/// `field` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cds_field_free(field: *mut CdsField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Builds the cover graph on the q^2 - 1 normalized nonsingular points.
///
/// # Safety
/// `field` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cds_gamma_build(field: *const CdsField, out: *mut *mut CdsDigraph) -> CdsStatus {
    guarded(|| {
        if field.is_null() {
            return fail(CdsStatus::NullArgument, "null field handle");
        }
        let spec = (*field).0;
        let gamma = build_gamma(&VertexSet::new(spec));
        write_out(out, Box::into_raw(Box::new(CdsDigraph(gamma))))
    })
}

/// Builds one of the two directed strongly regular graphs with parameters
/// (63,11,8,1,2). The field order must be 8; `orbit` is 'A' or 'B'.
///
/// # Safety
/// `field` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cds_delta_build(
    field: *const CdsField,
    orbit: c_char,
    out: *mut *mut CdsDigraph,
) -> CdsStatus {
    guarded(|| {
        if field.is_null() {
            return fail(CdsStatus::NullArgument, "null field handle");
        }
        let choice = match orbit as u8 {
            b'A' | b'a' => OrbitChoice::A,
            b'B' | b'b' => OrbitChoice::B,
            other => {
                return fail(
                    CdsStatus::InvalidArgument,
                    format!("orbit must be 'A' or 'B', got byte {other}"),
                )
            }
        };
        let ctx = match ConstructionContext::new((*field).0) {
            Ok(ctx) => ctx,
            Err(e) => return fail(CdsStatus::InvalidArgument, e.to_string()),
        };
        match ctx.build_delta(choice) {
            Ok(delta) => write_out(out, Box::into_raw(Box::new(CdsDigraph(delta)))),
            Err(e) => fail(CdsStatus::InternalError, e.to_string()),
        }
    })
}

/// Parses matrix01 text (n rows of n characters from {0,1}).
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cds_digraph_from_matrix01(
    text: *const c_char,
    out: *mut *mut CdsDigraph,
) -> CdsStatus {
    guarded(|| {
        let text = match read_str(text) {
            Ok(s) => s,
            Err(status) => return status,
        };
        match read_matrix01(text) {
            Ok(d) => write_out(out, Box::into_raw(Box::new(CdsDigraph(d)))),
            Err(e) => fail(CdsStatus::ParseError, e.to_string()),
        }
    })
}

/// Renders a digraph as matrix01 text. Free the result with
/// [`cds_string_free`].
///
/// # Safety
/// `digraph` must be a live handle; `out_text` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cds_digraph_to_matrix01(
    digraph: *const CdsDigraph,
    out_text: *mut *mut c_char,
) -> CdsStatus {
    guarded(|| {
        if digraph.is_null() {
            return fail(CdsStatus::NullArgument, "null digraph handle");
        }
        let mut buffer = Vec::new();
        write_matrix01(&(*digraph).0, &mut buffer).expect("writing to memory cannot fail");
        match CString::new(buffer) {
            Ok(text) => write_out(out_text, text.into_raw()),
            Err(_) => fail(CdsStatus::InternalError, "unexpected NUL in rendered text"),
        }
    })
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `digraph` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cds_digraph_order(digraph: *const CdsDigraph) -> usize {
    if digraph.is_null() {
        return 0;
    }
    (*digraph).0.n()
}

/// 1 if the arc is present, 0 otherwise (also for out-of-range queries).
///
/// # Safety
/// `digraph` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cds_digraph_has_arc(
    digraph: *const CdsDigraph,
    from: usize,
    to: usize,
) -> i32 {
    if digraph.is_null() {
        return 0;
    }
    let d = &(*digraph).0;
    i32::from(from < d.n() && to < d.n() && d.has_arc(from, to))
}

/// The digraph with every arc reversed.
///
/// # Safety
/// `digraph` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cds_digraph_transpose(
    digraph: *const CdsDigraph,
    out: *mut *mut CdsDigraph,
) -> CdsStatus {
    guarded(|| {
        if digraph.is_null() {
            return fail(CdsStatus::NullArgument, "null digraph handle");
        }
        let t = (*digraph).0.transpose();
        write_out(out, Box::into_raw(Box::new(CdsDigraph(t))))
    })
}

/// # Safety
/// `digraph` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cds_digraph_free(digraph: *mut CdsDigraph) {
    if !digraph.is_null() {
        drop(Box::from_raw(digraph));
    }
}

/// Checks the identity A^2 = tI + lambda A + mu (J - I - A) together with
/// in/out-regularity. Writes 1 or 0 to `pass`; a failed certificate is a
/// negative result, not an error.
///
/// # Safety
/// `digraph` must be a live handle; `pass` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cds_verify_dsrg(
    digraph: *const CdsDigraph,
    v: u32,
    k: u32,
    t: u32,
    lambda: u32,
    mu: u32,
    pass: *mut i32,
) -> CdsStatus {
    guarded(|| {
        if digraph.is_null() {
            return fail(CdsStatus::NullArgument, "null digraph handle");
        }
        let params = match DsrgParams::new(v, k, t, lambda, mu) {
            Ok(p) => p,
            Err(e) => return fail(CdsStatus::InvalidArgument, e.to_string()),
        };
        let certificate = verify_dsrg(&(*digraph).0, params);
        if let Some(violation) = &certificate.violation {
            set_error(violation.to_string());
        }
        write_out(pass, i32::from(certificate.ok()))
    })
}

/// Decides digraph isomorphism; writes 1 or 0 to `isomorphic`.
///
/// # Safety
/// `a` and `b` must be live handles; `isomorphic` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cds_isomorphic(
    a: *const CdsDigraph,
    b: *const CdsDigraph,
    isomorphic: *mut i32,
) -> CdsStatus {
    guarded(|| {
        if a.is_null() || b.is_null() {
            return fail(CdsStatus::NullArgument, "null digraph handle");
        }
        match iso::find_isomorphism(&(*a).0, &(*b).0, iso::DEFAULT_NODE_BUDGET) {
            Ok(result) => write_out(isomorphic, i32::from(result.is_some())),
            Err(e) => fail(CdsStatus::BudgetExceeded, e.to_string()),
        }
    })
}

/// Computes the order of the automorphism group.
///
/// # Safety
/// `digraph` must be a live handle; `order` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cds_automorphism_order(
    digraph: *const CdsDigraph,
    order: *mut u64,
) -> CdsStatus {
    guarded(|| {
        if digraph.is_null() {
            return fail(CdsStatus::NullArgument, "null digraph handle");
        }
        let group = match iso::automorphism_group(&(*digraph).0, iso::DEFAULT_NODE_BUDGET) {
            Ok(g) => g,
            Err(e) => return fail(CdsStatus::BudgetExceeded, e.to_string()),
        };
        match group.order() {
            Ok(n) => write_out(order, n),
            Err(e) => fail(CdsStatus::InternalError, e.to_string()),
        }
    })
}

/// Runs the exhaustive transitive search over the given field (order 8)
/// and reports the isomorphism class count and raw survivor count.
///
/// # Safety
/// `field` must be a live handle; out-pointers may be null if unwanted.
#[no_mangle]
pub unsafe extern "C" fn cds_search_classes(
    field: *const CdsField,
    classes: *mut u32,
    survivors: *mut u32,
) -> CdsStatus {
    guarded(|| {
        if field.is_null() {
            return fail(CdsStatus::NullArgument, "null field handle");
        }
        let ctx = match ConstructionContext::new((*field).0) {
            Ok(ctx) => ctx,
            Err(e) => return fail(CdsStatus::InvalidArgument, e.to_string()),
        };
        let report = match search::search_all(&ctx) {
            Ok(r) => r,
            Err(e) => return fail(CdsStatus::InternalError, e.to_string()),
        };
        if !classes.is_null() {
            ptr::write(classes, report.classes.len() as u32);
        }
        if !survivors.is_null() {
            ptr::write(survivors, report.survivor_count as u32);
        }
        CdsStatus::Ok
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `text` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cds_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use std::ffi::CString;

    fn default_field() -> *mut CdsField {
        let mut field = ptr::null_mut();
        let status = unsafe { cds_field_default(3, &mut field) };
        assert_eq!(status, CdsStatus::Ok);
        field
    }

    #[test]
    fn field_lifecycle_and_errors() {
        let spec = CString::new("e=3,mod=0xB").unwrap();
        let mut field = ptr::null_mut();
        assert_eq!(unsafe { cds_field_parse(spec.as_ptr(), &mut field) }, CdsStatus::Ok);
        assert_eq!(unsafe { cds_field_order(field) }, 8);
        unsafe { cds_field_free(field) };

        let bad = CString::new("e=3,mod=0x9").unwrap();
        let mut field = ptr::null_mut();
        assert_eq!(unsafe { cds_field_parse(bad.as_ptr(), &mut field) }, CdsStatus::ParseError);
        let message = unsafe { CStr::from_ptr(cds_last_error()) };
        assert!(message.to_str().unwrap().contains("reducible"));
        assert_eq!(
            unsafe { cds_field_parse(ptr::null(), &mut field) },
            CdsStatus::NullArgument
        );
        assert_eq!(unsafe { cds_field_default(0, &mut field) }, CdsStatus::InvalidArgument);
    }

    #[test]
    fn gamma_and_delta_round_trip_through_text() {
        let field = default_field();
        let mut gamma = ptr::null_mut();
        assert_eq!(unsafe { cds_gamma_build(field, &mut gamma) }, CdsStatus::Ok);
        assert_eq!(unsafe { cds_digraph_order(gamma) }, 63);

        let mut delta = ptr::null_mut();
        assert_eq!(unsafe { cds_delta_build(field, b'A' as c_char, &mut delta) }, CdsStatus::Ok);
        let mut pass = -1;
        assert_eq!(
            unsafe { cds_verify_dsrg(delta, 63, 11, 8, 1, 2, &mut pass) },
            CdsStatus::Ok
        );
        assert_eq!(pass, 1);
        assert_eq!(
            unsafe { cds_verify_dsrg(gamma, 63, 11, 8, 1, 2, &mut pass) },
            CdsStatus::Ok
        );
        assert_eq!(pass, 0);

        let mut text = ptr::null_mut();
        assert_eq!(unsafe { cds_digraph_to_matrix01(delta, &mut text) }, CdsStatus::Ok);
        let mut parsed = ptr::null_mut();
        assert_eq!(unsafe { cds_digraph_from_matrix01(text, &mut parsed) }, CdsStatus::Ok);
        assert_eq!(unsafe { cds_digraph_order(parsed) }, 63);
        for (u, v) in [(0usize, 1usize), (0, 62), (5, 7), (62, 0)] {
            assert_eq!(
                unsafe { cds_digraph_has_arc(parsed, u, v) },
                unsafe { cds_digraph_has_arc(delta, u, v) }
            );
        }
        unsafe {
            cds_string_free(text);
            cds_digraph_free(parsed);
            cds_digraph_free(gamma);
            cds_digraph_free(delta);
            cds_field_free(field);
        }
    }

    #[test]
    fn isomorphism_and_automorphisms_across_the_boundary() {
        let field = default_field();
        let mut delta_a = ptr::null_mut();
        let mut delta_b = ptr::null_mut();
        unsafe {
            assert_eq!(cds_delta_build(field, b'A' as c_char, &mut delta_a), CdsStatus::Ok);
            assert_eq!(cds_delta_build(field, b'B' as c_char, &mut delta_b), CdsStatus::Ok);
        }
        let mut answer = -1;
        assert_eq!(unsafe { cds_isomorphic(delta_a, delta_b, &mut answer) }, CdsStatus::Ok);
        assert_eq!(answer, 0);
        let mut transposed = ptr::null_mut();
        assert_eq!(unsafe { cds_digraph_transpose(delta_a, &mut transposed) }, CdsStatus::Ok);
        assert_eq!(unsafe { cds_isomorphic(delta_b, transposed, &mut answer) }, CdsStatus::Ok);
        assert_eq!(answer, 1);
        let mut order = 0u64;
        assert_eq!(unsafe { cds_automorphism_order(delta_a, &mut order) }, CdsStatus::Ok);
        assert_eq!(order, 1512);
        unsafe {
            cds_digraph_free(transposed);
            cds_digraph_free(delta_a);
            cds_digraph_free(delta_b);
            cds_field_free(field);
        }
    }

    #[test]
    fn search_over_the_boundary() {
        let field = default_field();
        let mut classes = 0u32;
        let mut survivors = 0u32;
        assert_eq!(
            unsafe { cds_search_classes(field, &mut classes, &mut survivors) },
            CdsStatus::Ok
        );
        assert_eq!(classes, 2);
        assert_eq!(survivors, 14);
        unsafe { cds_field_free(field) };
    }

    #[test]
    fn invalid_orbit_is_rejected() {
        let field = default_field();
        let mut delta = ptr::null_mut();
        assert_eq!(
            unsafe { cds_delta_build(field, b'C' as c_char, &mut delta) },
            CdsStatus::InvalidArgument
        );
        assert!(delta.is_null());
        unsafe { cds_field_free(field) };
    }

    #[test]
    fn status_names_and_version() {
        let name = unsafe { CStr::from_ptr(cds_status_name(CdsStatus::ParseError)) };
        assert_eq!(name.to_str().unwrap(), "CDS_PARSE_ERROR");
        let version = unsafe { CStr::from_ptr(cds_version()) };
        assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }

    /// Every exported function must be declared in the committed header,
    /// and every cds_ call signature in the header must be exported.
    #[test]
    fn header_matches_exported_symbols() {
        let header = include_str!("../include/conic_dsrg.h");
        let source = include_str!("lib.rs");
        let exported: BTreeSet<String> = {
            let marker = "extern \"C\" fn cds_";
            let mut names = BTreeSet::new();
            let mut rest = source;
            while let Some(at) = rest.find(marker) {
                rest = &rest[at + marker.len()..];
                let ident: String =
                    rest.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
                names.insert(format!("cds_{ident}"));
            }
            names
        };
        // Header declarations: an identifier cds_* directly followed by '('.
        let declared: BTreeSet<String> = {
            let mut names = BTreeSet::new();
            let bytes = header.as_bytes();
            let mut at = 0;
            while let Some(found) = header[at..].find("cds_") {
                let start = at + found;
                let preceded_by_ident = start > 0
                    && (bytes[start - 1].is_ascii_alphanumeric() || bytes[start - 1] == b'_');
                let end = start
                    + header[start..]
                        .chars()
                        .take_while(|c| c.is_alphanumeric() || *c == '_')
                        .map(|c| c.len_utf8())
                        .sum::<usize>();
                if !preceded_by_ident && header[end..].starts_with('(') {
                    names.insert(header[start..end].to_string());
                }
                at = end;
            }
            names
        };
        assert_eq!(exported, declared, "header and exported symbols diverge");
    }
}
