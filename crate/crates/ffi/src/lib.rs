//! C ABI over `dotpairs`.
//!
//! Every function returns a [`DpStatus`]; results come back through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`dp_last_error_message`]. Point sets are opaque [`DpPointSet`] handles
//! released with [`dp_point_set_free`]; strings handed out by the library
//! are released with [`dp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dotpairs::bounds::{self, EnvelopeOptions, Verdict, Verifier};
use dotpairs::constructions::{gen_highdim_cubic, gen_line_fan, gen_pencil, gen_separated_grid};
use dotpairs::{count_pi, flat_stats, io, CountMethod, Error, FieldSpec, PointSet, Scalar};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidParameter = 4,
    FieldMismatch = 5,
    Validation = 6,
    Unsupported = 7,
    Io = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpCountMethod {
    Fast = 0,
    Brute = 1,
}

/// Opaque point set.
pub struct DpPointSet {
    inner: PointSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(DpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) | Error::Json(_) | Error::NotPrime(_) => DpStatus::Parse,
            Error::FieldMismatch { .. } | Error::DimensionMismatch { .. } => DpStatus::FieldMismatch,
            Error::Validation(_) => DpStatus::Validation,
            Error::Unsupported(_) => DpStatus::Unsupported,
            Error::Io(_) | Error::Csv(_) => DpStatus::Io,
            _ => DpStatus::InvalidParameter,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(DpStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, recording any error or panic as the thread's last error.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> DpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DpStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            DpStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(DpStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn set_ref<'a>(set: *const DpPointSet) -> Result<&'a PointSet, Failure> {
    set.as_ref().map(|s| &s.inner).ok_or_else(|| null("set"))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_set(out: *mut *mut DpPointSet, set: PointSet) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(DpPointSet { inner: set })));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(text).map_err(|_| Failure(DpStatus::Internal, "string contains nul".into()))?;
    out.write(c.into_raw());
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn dp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn dp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a point-set JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_point_set_from_json(json: *const c_char, out: *mut *mut DpPointSet) -> DpStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        write_set(out, io::parse_point_set(text)?)
    })
}

/// Loads a point-set file.
///
/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_point_set_load(path: *const c_char, out: *mut *mut DpPointSet) -> DpStatus {
    guard(|| {
        let path = read_str(path, "path")?;
        write_set(out, io::load_point_set(path)?)
    })
}

/// Serializes a set to canonical JSON; free the result with [`dp_string_free`].
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_point_set_to_json(set: *const DpPointSet, out: *mut *mut c_char) -> DpStatus {
    guard(|| write_string(out, io::point_set_to_json(set_ref(set)?)?))
}

/// # Safety
/// `set` must be a live handle; `out_len` and `out_dim` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_point_set_shape(
    set: *const DpPointSet,
    out_len: *mut usize,
    out_dim: *mut usize,
) -> DpStatus {
    guard(|| {
        let set = set_ref(set)?;
        write_out(out_len, set.len(), "out_len")?;
        write_out(out_dim, set.dim(), "out_dim")
    })
}

/// Field characteristic: 0 for the rationals, `p` for `F_p`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_point_set_characteristic(set: *const DpPointSet, out: *mut u64) -> DpStatus {
    guard(|| write_out(out, set_ref(set)?.field().characteristic(), "out"))
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dp_point_set_free(set: *mut DpPointSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_gen_line_fan(n: usize, s: usize, out: *mut *mut DpPointSet) -> DpStatus {
    guard(|| write_set(out, gen_line_fan(n, s)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_gen_separated_grid(n: usize, m: usize, out: *mut *mut DpPointSet) -> DpStatus {
    guard(|| write_set(out, gen_separated_grid(n, m)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_gen_pencil(k: usize, out: *mut *mut DpPointSet) -> DpStatus {
    guard(|| write_set(out, gen_pencil(k)?))
}

/// `beta` is a rational in scalar text form, e.g. `"5"` or `"-1/2"`.
///
/// # Safety
/// `beta` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_gen_highdim_cubic(
    a_count: usize,
    beta: *const c_char,
    out: *mut *mut DpPointSet,
) -> DpStatus {
    guard(|| {
        let beta = Scalar::parse(read_str(beta, "beta")?, FieldSpec::Rational)?;
        write_set(out, gen_highdim_cubic(a_count, &beta)?)
    })
}

unsafe fn dots(set: &PointSet, alpha: *const c_char, beta: *const c_char) -> Result<(Scalar, Scalar), Failure> {
    Ok((
        Scalar::parse(read_str(alpha, "alpha")?, set.field())?,
        Scalar::parse(read_str(beta, "beta")?, set.field())?,
    ))
}

/// `|Π_{α,β}|` with α, β in scalar text form for the set's field.
///
/// # Safety
/// `set` must be a live handle, `alpha`/`beta` nul-terminated strings and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dp_count(
    set: *const DpPointSet,
    alpha: *const c_char,
    beta: *const c_char,
    method: DpCountMethod,
    out: *mut u64,
) -> DpStatus {
    guard(|| {
        let set = set_ref(set)?;
        let (a, b) = dots(set, alpha, beta)?;
        let method = match method {
            DpCountMethod::Fast => CountMethod::Fast,
            DpCountMethod::Brute => CountMethod::Brute,
        };
        write_out(out, count_pi(set, &a, &b, method)?.total, "out")
    })
}

/// Largest number of points on a hyperplane and on a codimension-2 flat.
///
/// # Safety
/// `set` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_flat_stats(
    set: *const DpPointSet,
    out_s_star: *mut usize,
    out_t_star: *mut usize,
) -> DpStatus {
    guard(|| {
        let stats = flat_stats(set_ref(set)?);
        write_out(out_s_star, stats.s_star, "out_s_star")?;
        write_out(out_t_star, stats.t_star, "out_t_star")
    })
}

/// Runs every applicable bound check with default envelope options and
/// returns the reports as a JSON array. `out_all_passed` is set to whether
/// every hard check passed; a failing check is not an error status.
///
/// # Safety
/// `set` must be a live handle, `alpha`/`beta` nul-terminated strings and
/// the out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn dp_verify_json(
    set: *const DpPointSet,
    alpha: *const c_char,
    beta: *const c_char,
    out_json: *mut *mut c_char,
    out_all_passed: *mut bool,
) -> DpStatus {
    guard(|| {
        let set = set_ref(set)?;
        let (a, b) = dots(set, alpha, beta)?;
        let reports = Verifier::new(set, &a, &b)?.all(&EnvelopeOptions::default())?;
        let passed = reports.iter().all(|r| r.verdict != Verdict::Fail);
        write_out(out_all_passed, passed, "out_all_passed")?;
        write_string(out_json, bounds::to_json(&reports)?)
    })
}
