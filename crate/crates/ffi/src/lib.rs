//! C ABI for `corrtensor`.
//!
//! States live behind the opaque [`CtState`] handle. Every function returns a
//! [`CtStatus`]; after a failure a description is available from
//! [`ct_last_error_message`] on the same thread. Strings handed out by the
//! library are released with [`ct_string_free`], states with
//! [`ct_state_free`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use corrtensor::correlation::{full_correlation_tensor, MatricizationSpec};
use corrtensor::criteria::{tolerance_from_result, white_noise_tolerance, Criterion};
use corrtensor::norms::singular_values;
use corrtensor::spec::{BuiltState, StateSpec};
use corrtensor::{CMatrix, DensityMatrix, DetectedClass, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    DimensionMismatch = 4,
    InvalidState = 5,
    Io = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtDetectedClass {
    None = 0,
    Gme = 1,
    NotFullySeparable = 2,
    ChshViolation = 3,
}

/// Summary of one criterion evaluation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtResult {
    /// 1 if any test is violated, 0 otherwise.
    pub violated: i32,
    /// Largest `value - threshold` over the tests.
    pub margin: f64,
    pub detected_class: CtDetectedClass,
    /// Value and threshold of the test with the largest margin.
    pub best_value: f64,
    pub best_threshold: f64,
    pub test_count: usize,
}

/// Opaque state handle.
pub struct CtState {
    inner: BuiltState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> CtStatus {
    match err {
        Error::Parse(_) => CtStatus::Parse,
        Error::InvalidParameter(_) => CtStatus::InvalidArgument,
        Error::InvalidDimension(_) | Error::DimensionMismatch(_) | Error::InvalidSubset(_) => {
            CtStatus::DimensionMismatch
        }
        Error::InvalidState(_) => CtStatus::InvalidState,
        Error::Io(_) => CtStatus::Io,
    }
}

struct Failure(CtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CtStatus::NullPointer, format!("{what} is null"))
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CtStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CtStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(CtStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn state_arg<'a>(p: *const CtState) -> Result<&'a CtState, Failure> {
    p.as_ref().ok_or_else(|| null("state"))
}

unsafe fn publish(out: *mut *mut CtState, inner: BuiltState) -> Result<(), Failure> {
    *out = Box::into_raw(Box::new(CtState { inner }));
    Ok(())
}

/// Build a state from a specification such as `ghz:d=2,n=3`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ct_state_from_spec(spec: *const c_char, seed: u64, out: *mut *mut CtState) -> CtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec: StateSpec = str_arg(spec, "spec")?.parse()?;
        publish(out, spec.build(seed)?)
    })
}

/// Build a state from a row-major `D x D` complex matrix given as separate
/// real and imaginary arrays, `D = dims[0] * … * dims[n_parties - 1]`.
/// `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `D*D` doubles, `dims` to
/// `n_parties` values, `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_state_from_matrix(
    re: *const f64,
    im: *const f64,
    dims: *const usize,
    n_parties: usize,
    out: *mut *mut CtState,
) -> CtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if re.is_null() {
            return Err(null("re"));
        }
        if dims.is_null() || n_parties == 0 {
            return Err(Failure(CtStatus::InvalidArgument, "dims must be non-empty".into()));
        }
        let dims = slice::from_raw_parts(dims, n_parties).to_vec();
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&t| t > 0 && t <= 1 << 12)
            .ok_or_else(|| Failure(CtStatus::InvalidArgument, format!("unsupported dims {dims:?}")))?;
        let re = slice::from_raw_parts(re, total * total);
        let im = if im.is_null() {
            None
        } else {
            Some(slice::from_raw_parts(im, total * total))
        };
        let m = CMatrix::from_fn(total, total, |r, c| {
            let k = r * total + c;
            num_complex::Complex64::new(re[k], im.map_or(0.0, |v| v[k]))
        });
        publish(out, DensityMatrix::new(m, dims)?.into())
    })
}

/// New state `p I/D + (1 - p) rho`.
///
/// # Safety
/// `state` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ct_state_white_noise(state: *const CtState, p: f64, out: *mut *mut CtState) -> CtStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = state_arg(state)?;
        publish(out, s.inner.density.mix_with_white_noise(p)?.into())
    })
}

/// Release a state. Null is ignored.
///
/// # Safety
/// `state` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ct_state_free(state: *mut CtState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Local dimensions of the parties. `n_parties` is always written; a
/// buffer shorter than that fails with `BufferTooSmall`.
///
/// # Safety
/// `dims` must hold `capacity` values and `n_parties` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_state_dims(
    state: *const CtState,
    dims: *mut usize,
    capacity: usize,
    n_parties: *mut usize,
) -> CtStatus {
    guard(|| {
        let s = state_arg(state)?;
        if n_parties.is_null() {
            return Err(null("n_parties"));
        }
        let d = s.inner.density.dims();
        *n_parties = d.len();
        copy_out(d, dims, capacity)
    })
}

unsafe fn copy_out<T: Copy>(src: &[T], dst: *mut T, capacity: usize) -> Result<(), Failure> {
    if capacity < src.len() {
        return Err(Failure(
            CtStatus::BufferTooSmall,
            format!("need room for {} values, got {capacity}", src.len()),
        ));
    }
    if dst.is_null() {
        return Err(null("output buffer"));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    Ok(())
}

fn class_of(c: DetectedClass) -> CtDetectedClass {
    match c {
        DetectedClass::None => CtDetectedClass::None,
        DetectedClass::Gme => CtDetectedClass::Gme,
        DetectedClass::NotFullySeparable => CtDetectedClass::NotFullySeparable,
        DetectedClass::ChshViolation => CtDetectedClass::ChshViolation,
    }
}

/// Evaluate a criterion (`t1`, `t2`, `t3`, `t4`, `t4u`, `t4@1,2`, `chsh`).
///
/// # Safety
/// `state` must be live, `criterion` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ct_detect(state: *const CtState, criterion: *const c_char, out: *mut CtResult) -> CtStatus {
    guard(|| {
        let s = state_arg(state)?;
        let c: Criterion = str_arg(criterion, "criterion")?.parse()?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = c.evaluate(&s.inner.density)?;
        let best = r.best();
        *out = CtResult {
            violated: r.violated as i32,
            margin: r.margin,
            detected_class: class_of(r.detected_class),
            best_value: best.value,
            best_threshold: best.threshold,
            test_count: r.tests.len(),
        };
        Ok(())
    })
}

/// Full criterion result as a JSON string; free it with [`ct_string_free`].
///
/// # Safety
/// As [`ct_detect`]; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_detect_json(
    state: *const CtState,
    criterion: *const c_char,
    out_json: *mut *mut c_char,
) -> CtStatus {
    guard(|| {
        let s = state_arg(state)?;
        let c: Criterion = str_arg(criterion, "criterion")?.parse()?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let r = c.evaluate(&s.inner.density)?;
        let json = serde_json::to_string(&r).map_err(|e| Failure(CtStatus::Panic, e.to_string()))?;
        *out_json = CString::new(json).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// White-noise tolerance `p*` of a criterion; `detected` is set to 0 when
/// the noiseless state is not detected (then `p* = 0`).
///
/// # Safety
/// `state` must be live, `criterion` NUL-terminated, `p` and `detected`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ct_white_noise_tolerance(
    state: *const CtState,
    criterion: *const c_char,
    p: *mut f64,
    detected: *mut i32,
) -> CtStatus {
    guard(|| {
        let s = state_arg(state)?;
        let c: Criterion = str_arg(criterion, "criterion")?.parse()?;
        if p.is_null() || detected.is_null() {
            return Err(null("output"));
        }
        let tol = match &s.inner.pure {
            Some(psi) => white_noise_tolerance(psi, &c)?,
            None => tolerance_from_result(&c.evaluate(&s.inner.density)?, c.noise_exponent()),
        };
        *p = tol.p;
        *detected = tol.detected as i32;
        Ok(())
    })
}

/// Euclidean norm of the full correlation tensor.
///
/// # Safety
/// `state` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ct_full_tensor_norm(state: *const CtState, out: *mut f64) -> CtStatus {
    guard(|| {
        let s = state_arg(state)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = full_correlation_tensor(&s.inner.density).standard_norm();
        Ok(())
    })
}

/// Singular values (descending) of the matricization with the given 1-based
/// row parties. `len` always receives the spectrum length; with too small a
/// buffer the call fails with `BufferTooSmall`.
///
/// # Safety
/// `rows` must hold `n_rows` values, `values` room for `capacity` doubles,
/// `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_matricization_spectrum(
    state: *const CtState,
    rows: *const usize,
    n_rows: usize,
    values: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> CtStatus {
    guard(|| {
        let s = state_arg(state)?;
        if rows.is_null() || len.is_null() {
            return Err(null("rows or len"));
        }
        let rows: Vec<usize> = slice::from_raw_parts(rows, n_rows)
            .iter()
            .map(|&r| {
                r.checked_sub(1)
                    .ok_or_else(|| Failure(CtStatus::InvalidArgument, "parties are 1-based".into()))
            })
            .collect::<Result<_, _>>()?;
        let t = full_correlation_tensor(&s.inner.density);
        let spec = MatricizationSpec::new(&rows, t.order())?;
        let spectrum = singular_values(&t.matricize(&spec)?);
        *len = spectrum.len();
        copy_out(spectrum.values(), values, capacity)
    })
}

/// Release a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent call on this thread if it failed, null if it
/// succeeded. Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn ct_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn ct_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
