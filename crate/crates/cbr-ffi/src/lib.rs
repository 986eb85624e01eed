//! C ABI over the diagram calculus. Handles are opaque pointers owned by the
//! caller and released with the matching `_free` function. Every fallible
//! call returns a status code; the message for the most recent failure on the
//! current thread is available via `cbr_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use cbr::diagram::{compose, tensor, Diagram};
use cbr::dsl::{self, DslError};
use cbr::json::{self, JsonError};
use cbr::represent::{eval, is_faithful, Representation};

/// Status codes mirroring the CLI exit codes, plus argument errors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CbrStatus {
    CbrOk = 0,
    CbrErrDomain = 1,
    CbrErrParse = 2,
    CbrErrNullArgument = 3,
    CbrErrInvalidUtf8 = 4,
}

/// An immutable diagram handle.
pub struct CbrDiagram(Diagram);

/// An immutable representation handle.
pub struct CbrRepresentation(Representation);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: CbrStatus, message: &str) -> CbrStatus {
    let sanitized: Vec<u8> = message.bytes().filter(|&b| b != 0).collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("nul bytes removed");
    });
    status
}

fn fail_json(e: JsonError) -> CbrStatus {
    let status = match e {
        JsonError::Syntax(_) | JsonError::Format { .. } => CbrStatus::CbrErrParse,
        _ => CbrStatus::CbrErrDomain,
    };
    fail(status, &e.to_string())
}

/// The message of the most recent error on this thread. The pointer stays
/// valid until the next failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn cbr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CbrStatus> {
    if s.is_null() {
        return Err(fail(CbrStatus::CbrErrNullArgument, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(CbrStatus::CbrErrInvalidUtf8, "string is not valid UTF-8"))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> CbrStatus {
    if out.is_null() {
        return fail(CbrStatus::CbrErrNullArgument, "null output pointer");
    }
    *out = Box::into_raw(Box::new(value));
    CbrStatus::CbrOk
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, CbrStatus> {
    p.as_ref()
        .ok_or_else(|| fail(CbrStatus::CbrErrNullArgument, "null handle"))
}

fn string_out(s: String, out: *mut *mut c_char) -> CbrStatus {
    if out.is_null() {
        return fail(CbrStatus::CbrErrNullArgument, "null output pointer");
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            CbrStatus::CbrOk
        }
        Err(_) => fail(CbrStatus::CbrErrDomain, "output contains a nul byte"),
    }
}

/// Parse a diagram from its JSON form.
///
/// # Safety
/// `text` must be a valid nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cbr_diagram_from_json(
    text: *const c_char,
    out: *mut *mut CbrDiagram,
) -> CbrStatus {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match json::diagram_from_str(text) {
        Ok(d) => write_out(out, CbrDiagram(d)),
        Err(e) => fail_json(e),
    }
}

/// Parse a diagram from the one-line expression language.
///
/// # Safety
/// `text` must be a valid nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cbr_diagram_from_expr(
    text: *const c_char,
    out: *mut *mut CbrDiagram,
) -> CbrStatus {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match dsl::parse_expr(text) {
        Ok(d) => write_out(out, CbrDiagram(d)),
        Err(e @ DslError::Parse { .. }) => fail(CbrStatus::CbrErrParse, &e.to_string()),
        Err(e) => fail(CbrStatus::CbrErrDomain, &e.to_string()),
    }
}

/// Serialize a diagram to canonical JSON. Free the result with
/// `cbr_string_free`.
///
/// # Safety
/// `d` must be a live diagram handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cbr_diagram_to_json(
    d: *const CbrDiagram,
    out: *mut *mut c_char,
) -> CbrStatus {
    let d = match deref(d) {
        Ok(d) => d,
        Err(s) => return s,
    };
    string_out(json::diagram_to_string(&d.0), out)
}

/// `out = second ∘ first` (the first argument is applied first).
///
/// # Safety
/// `first` and `second` must be live diagram handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cbr_diagram_compose(
    first: *const CbrDiagram,
    second: *const CbrDiagram,
    out: *mut *mut CbrDiagram,
) -> CbrStatus {
    let (f, g) = match (deref(first), deref(second)) {
        (Ok(f), Ok(g)) => (f, g),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match compose(&g.0, &f.0) {
        Ok(d) => write_out(out, CbrDiagram(d)),
        Err(e) => fail(CbrStatus::CbrErrDomain, &e.to_string()),
    }
}

/// `out = left ⊗ right`.
///
/// # Safety
/// `left` and `right` must be live diagram handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cbr_diagram_tensor(
    left: *const CbrDiagram,
    right: *const CbrDiagram,
    out: *mut *mut CbrDiagram,
) -> CbrStatus {
    let (l, r) = match (deref(left), deref(right)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    write_out(out, CbrDiagram(tensor(&l.0, &r.0)))
}

/// Writes 1 to `out` if the diagrams are equal, 0 otherwise.
///
/// # Safety
/// `a` and `b` must be live diagram handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cbr_diagram_equal(
    a: *const CbrDiagram,
    b: *const CbrDiagram,
    out: *mut i32,
) -> CbrStatus {
    let (a, b) = match (deref(a), deref(b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    if out.is_null() {
        return fail(CbrStatus::CbrErrNullArgument, "null output pointer");
    }
    *out = i32::from(a.0 == b.0);
    CbrStatus::CbrOk
}

/// # Safety
/// `d` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn cbr_diagram_free(d: *mut CbrDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Parse a representation from its JSON form.
///
/// # Safety
/// `text` must be a valid nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cbr_representation_from_json(
    text: *const c_char,
    out: *mut *mut CbrRepresentation,
) -> CbrStatus {
    let text = match read_str(text) {
        Ok(t) => t,
        Err(s) => return s,
    };
    match json::representation_from_str(text) {
        Ok(r) => write_out(out, CbrRepresentation(r)),
        Err(e) => fail_json(e),
    }
}

/// The representation with identity counit matrices of the given dimensions,
/// assigned to colors 0, 1, ….
///
/// # Safety
/// `dims` must point to `len` readable entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cbr_representation_standard(
    dims: *const usize,
    len: usize,
    out: *mut *mut CbrRepresentation,
) -> CbrStatus {
    if dims.is_null() && len > 0 {
        return fail(CbrStatus::CbrErrNullArgument, "null dims pointer");
    }
    let dims = std::slice::from_raw_parts(if len == 0 { ptr::NonNull::dangling().as_ptr() } else { dims }, len);
    if dims.contains(&0) {
        return fail(CbrStatus::CbrErrDomain, "zero dimension");
    }
    write_out(out, CbrRepresentation(Representation::standard(dims)))
}

/// # Safety
/// `r` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn cbr_representation_free(r: *mut CbrRepresentation) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Evaluate a diagram to its exact rational matrix, returned as JSON. Free
/// the result with `cbr_string_free`.
///
/// # Safety
/// `rep` and `d` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cbr_eval_to_json(
    rep: *const CbrRepresentation,
    d: *const CbrDiagram,
    out: *mut *mut c_char,
) -> CbrStatus {
    let (rep, d) = match (deref(rep), deref(d)) {
        (Ok(r), Ok(d)) => (r, d),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match eval(&rep.0, &d.0) {
        Ok(m) => string_out(json::matrix_to_value(&m).to_string(), out),
        Err(e) => fail(CbrStatus::CbrErrDomain, &e.to_string()),
    }
}

/// Decide faithfulness for the dimension list. Writes 1 or 0 to `faithful`;
/// when unfaithful and `witness_json` is non-null, also writes the integer
/// witness vector as a JSON array (free with `cbr_string_free`), otherwise
/// writes null there.
///
/// # Safety
/// `dims` must point to `len` readable entries; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cbr_check_faithful(
    dims: *const u64,
    len: usize,
    faithful: *mut i32,
    witness_json: *mut *mut c_char,
) -> CbrStatus {
    if (dims.is_null() && len > 0) || faithful.is_null() {
        return fail(CbrStatus::CbrErrNullArgument, "null argument");
    }
    let dims = std::slice::from_raw_parts(if len == 0 { ptr::NonNull::dangling().as_ptr() } else { dims }, len);
    match is_faithful(dims) {
        Ok(verdict) => {
            *faithful = i32::from(verdict.faithful);
            if !witness_json.is_null() {
                *witness_json = ptr::null_mut();
                if let Some(w) = verdict.witness {
                    let mut tmp: *mut c_char = ptr::null_mut();
                    let status = string_out(serde_json::to_string(&w).expect("integer vector"), &mut tmp);
                    if status != CbrStatus::CbrOk {
                        return status;
                    }
                    *witness_json = tmp;
                }
            }
            CbrStatus::CbrOk
        }
        Err(e) => fail(CbrStatus::CbrErrDomain, &e.to_string()),
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a string returned by this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn cbr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
