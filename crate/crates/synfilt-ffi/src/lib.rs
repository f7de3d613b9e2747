//! C ABI for the synfilt library.
//!
//! Conventions: every fallible function returns a [`SynfiltStatus`]
//! code and writes results through out-pointers. Strings returned
//! through `*mut c_char` out-pointers are heap-allocated and must be
//! released with [`synfilt_string_free`]; filtration handles are opaque
//! and must be released with [`synfilt_filtration_free`]. Handles are
//! not synchronized; use one handle per thread.

use std::ffi::{c_char, CStr, CString};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use synfilt::context::{self, ContextPrefix};
use synfilt::dirichlet::{self, DirichletParams};
use synfilt::filtration::{FiltrationState, ObservationEvent};
use synfilt::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynfiltStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments were structurally valid but rejected by the library.
    InvalidArgument = 2,
    /// Text input could not be parsed.
    ParseError = 3,
    /// A string argument was not valid UTF-8.
    Utf8Error = 4,
    /// An output buffer had the wrong length.
    BufferLengthMismatch = 5,
}

fn status_of(err: &Error) -> SynfiltStatus {
    match err {
        Error::Parse(_) => SynfiltStatus::ParseError,
        _ => SynfiltStatus::InvalidArgument,
    }
}

/// A static description of a status code. Never needs freeing.
#[no_mangle]
pub extern "C" fn synfilt_status_message(status: SynfiltStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        SynfiltStatus::Ok => b"ok\0",
        SynfiltStatus::NullPointer => b"null pointer argument\0",
        SynfiltStatus::InvalidArgument => b"invalid argument\0",
        SynfiltStatus::ParseError => b"parse error\0",
        SynfiltStatus::Utf8Error => b"invalid utf-8\0",
        SynfiltStatus::BufferLengthMismatch => b"output buffer length mismatch\0",
    };
    text.as_ptr().cast()
}

/// The library version as a static C string. Never needs freeing.
#[no_mangle]
pub extern "C" fn synfilt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string previously returned through an out-pointer.
///
/// # Safety
/// `s` must be a pointer returned by this library and not yet freed;
/// null is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn synfilt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, SynfiltStatus> {
    if ptr.is_null() {
        return Err(SynfiltStatus::NullPointer);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| SynfiltStatus::Utf8Error)
}

fn write_string(out: *mut *mut c_char, text: String) -> SynfiltStatus {
    if out.is_null() {
        return SynfiltStatus::NullPointer;
    }
    match CString::new(text) {
        Ok(cstring) => {
            unsafe { *out = cstring.into_raw() };
            SynfiltStatus::Ok
        }
        Err(_) => SynfiltStatus::InvalidArgument,
    }
}

unsafe fn read_alpha(
    alpha: *const f64,
    alpha_len: usize,
) -> Result<DirichletParams, SynfiltStatus> {
    if alpha.is_null() {
        return Err(SynfiltStatus::NullPointer);
    }
    let entries = std::slice::from_raw_parts(alpha, alpha_len).to_vec();
    DirichletParams::new(entries).map_err(|e| status_of(&e))
}

/// Expands a rational "m/n" in [0, 1) into comma-separated
/// factorial-base digits, written to `out_digits`.
///
/// # Safety
/// `rational` must be a valid NUL-terminated string and `out_digits` a
/// valid pointer; the result must be freed with `synfilt_string_free`.
#[no_mangle]
pub unsafe extern "C" fn synfilt_cantor_encode(
    rational: *const c_char,
    out_digits: *mut *mut c_char,
) -> SynfiltStatus {
    let text = match read_str(rational) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let value = match context::parse_rational(text) {
        Ok(v) => v,
        Err(e) => return status_of(&e),
    };
    let digits = match context::cantor_expand(&value) {
        Ok(d) => d,
        Err(e) => return status_of(&e),
    };
    let joined = digits
        .digits()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",");
    write_string(out_digits, joined)
}

/// Recovers the exact rational "m/n" from comma-separated digits,
/// written to `out_rational`.
///
/// # Safety
/// Same contract as [`synfilt_cantor_encode`].
#[no_mangle]
pub unsafe extern "C" fn synfilt_cantor_decode(
    digits: *const c_char,
    out_rational: *mut *mut c_char,
) -> SynfiltStatus {
    let text = match read_str(digits) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let parsed: Result<Vec<usize>, _> = if text.trim().is_empty() {
        Ok(Vec::new())
    } else {
        text.split(',')
            .map(|tok| tok.trim().parse::<usize>())
            .collect()
    };
    let Ok(parsed) = parsed else {
        return SynfiltStatus::ParseError;
    };
    let prefix = match ContextPrefix::new(parsed) {
        Ok(p) => p,
        Err(e) => return status_of(&e),
    };
    write_string(out_rational, context::cantor_value(&prefix).to_string())
}

/// Draws `n_samples` points from the Dirichlet with the given
/// parameters, writing them row-major into `out` (`n_samples` rows of
/// `alpha_len` coordinates). `out_len` must equal
/// `n_samples * alpha_len`.
///
/// # Safety
/// `alpha` must point to `alpha_len` doubles and `out` to `out_len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn synfilt_dirichlet_sample(
    alpha: *const f64,
    alpha_len: usize,
    n_samples: usize,
    seed: u64,
    out: *mut f64,
    out_len: usize,
) -> SynfiltStatus {
    let params = match read_alpha(alpha, alpha_len) {
        Ok(p) => p,
        Err(status) => return status,
    };
    if out.is_null() {
        return SynfiltStatus::NullPointer;
    }
    if out_len != n_samples.saturating_mul(alpha_len) {
        return SynfiltStatus::BufferLengthMismatch;
    }
    let out = std::slice::from_raw_parts_mut(out, out_len);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for row in 0..n_samples {
        let draw = dirichlet::sample(&params, &mut rng);
        out[row * alpha_len..(row + 1) * alpha_len].copy_from_slice(draw.weights());
    }
    SynfiltStatus::Ok
}

/// Writes the analytic per-coordinate mean and variance of the
/// Dirichlet into `out_mean` and `out_variance` (each `alpha_len`
/// doubles).
///
/// # Safety
/// All pointers must cover `alpha_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn synfilt_dirichlet_moments(
    alpha: *const f64,
    alpha_len: usize,
    out_mean: *mut f64,
    out_variance: *mut f64,
) -> SynfiltStatus {
    let params = match read_alpha(alpha, alpha_len) {
        Ok(p) => p,
        Err(status) => return status,
    };
    if out_mean.is_null() || out_variance.is_null() {
        return SynfiltStatus::NullPointer;
    }
    let moments = dirichlet::induced_measure_moments(&params);
    std::slice::from_raw_parts_mut(out_mean, alpha_len).copy_from_slice(&moments.mean);
    std::slice::from_raw_parts_mut(out_variance, alpha_len).copy_from_slice(&moments.variance);
    SynfiltStatus::Ok
}

/// Runs the pushforward moment-matching check and writes the JSON
/// report to `out_json`.
///
/// # Safety
/// `alpha` must point to `alpha_len` doubles; the returned string must
/// be freed with `synfilt_string_free`.
#[no_mangle]
pub unsafe extern "C" fn synfilt_pushforward_report_json(
    alpha: *const f64,
    alpha_len: usize,
    face: usize,
    n_samples: usize,
    seed: u64,
    out_json: *mut *mut c_char,
) -> SynfiltStatus {
    let params = match read_alpha(alpha, alpha_len) {
        Ok(p) => p,
        Err(status) => return status,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = match dirichlet::verify_pushforward_face(&params, face, n_samples, &mut rng) {
        Ok(r) => r,
        Err(e) => return status_of(&e),
    };
    report.seed = Some(seed);
    write_string(
        out_json,
        serde_json::to_string(&report).expect("report serializes"),
    )
}

/// Opaque filtration handle.
pub struct SynfiltFiltration {
    state: FiltrationState,
}

/// Creates a filtration anchored at dimension `alpha_len - 1` over the
/// given context digits; writes the handle to `out`.
///
/// # Safety
/// `alpha` must point to `alpha_len` doubles, `digits` to `digits_len`
/// values (null allowed when `digits_len` is 0), and `out` must be
/// writable. The handle must be freed with `synfilt_filtration_free`.
#[no_mangle]
pub unsafe extern "C" fn synfilt_filtration_new(
    alpha: *const f64,
    alpha_len: usize,
    digits: *const u64,
    digits_len: usize,
    out: *mut *mut SynfiltFiltration,
) -> SynfiltStatus {
    let params = match read_alpha(alpha, alpha_len) {
        Ok(p) => p,
        Err(status) => return status,
    };
    if out.is_null() || (digits.is_null() && digits_len > 0) {
        return SynfiltStatus::NullPointer;
    }
    let digit_values: Vec<usize> = if digits_len == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(digits, digits_len)
            .iter()
            .map(|&d| d as usize)
            .collect()
    };
    let context = match ContextPrefix::new(digit_values) {
        Ok(c) => c,
        Err(e) => return status_of(&e),
    };
    let handle = Box::new(SynfiltFiltration {
        state: FiltrationState::new(params, context),
    });
    *out = Box::into_raw(handle);
    SynfiltStatus::Ok
}

/// Restores a filtration from its persisted JSON form.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn synfilt_filtration_from_json(
    json: *const c_char,
    out: *mut *mut SynfiltFiltration,
) -> SynfiltStatus {
    let text = match read_str(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    if out.is_null() {
        return SynfiltStatus::NullPointer;
    }
    match serde_json::from_str::<FiltrationState>(text) {
        Ok(state) => {
            *out = Box::into_raw(Box::new(SynfiltFiltration { state }));
            SynfiltStatus::Ok
        }
        Err(_) => SynfiltStatus::ParseError,
    }
}

/// Writes the persisted JSON form of the filtration to `out_json`.
///
/// # Safety
/// `handle` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn synfilt_filtration_to_json(
    handle: *const SynfiltFiltration,
    out_json: *mut *mut c_char,
) -> SynfiltStatus {
    let Some(filtration) = handle.as_ref() else {
        return SynfiltStatus::NullPointer;
    };
    write_string(
        out_json,
        serde_json::to_string(&filtration.state).expect("state serializes"),
    )
}

/// Writes the anchor time to `out_time`.
///
/// # Safety
/// `handle` must be live and `out_time` writable.
#[no_mangle]
pub unsafe extern "C" fn synfilt_filtration_anchor_time(
    handle: *const SynfiltFiltration,
    out_time: *mut usize,
) -> SynfiltStatus {
    let Some(filtration) = handle.as_ref() else {
        return SynfiltStatus::NullPointer;
    };
    if out_time.is_null() {
        return SynfiltStatus::NullPointer;
    }
    *out_time = filtration.state.anchor_time();
    SynfiltStatus::Ok
}

/// Records one observation of `category` at the anchor time,
/// replacing the handle's state with the conjugate update.
///
/// # Safety
/// `handle` must be live and not concurrently accessed.
#[no_mangle]
pub unsafe extern "C" fn synfilt_filtration_observe(
    handle: *mut SynfiltFiltration,
    category: usize,
) -> SynfiltStatus {
    let Some(filtration) = handle.as_mut() else {
        return SynfiltStatus::NullPointer;
    };
    let event = match ObservationEvent::new(filtration.state.anchor_time(), category) {
        Ok(e) => e,
        Err(e) => return status_of(&e),
    };
    match filtration.state.bayes_update(&event) {
        Ok(next) => {
            filtration.state = next;
            SynfiltStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Moves the anchor one step into the future with the given split
/// fraction in [0, 1].
///
/// # Safety
/// `handle` must be live and not concurrently accessed.
#[no_mangle]
pub unsafe extern "C" fn synfilt_filtration_advance(
    handle: *mut SynfiltFiltration,
    fraction: f64,
) -> SynfiltStatus {
    let Some(filtration) = handle.as_mut() else {
        return SynfiltStatus::NullPointer;
    };
    match filtration.state.advance(fraction) {
        Ok(next) => {
            filtration.state = next;
            SynfiltStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Writes the determined parameters at past time `s` into `out`
/// (`out_len` must equal `s + 1`).
///
/// # Safety
/// `handle` must be live; `out` must cover `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn synfilt_filtration_params_at(
    handle: *const SynfiltFiltration,
    s: usize,
    out: *mut f64,
    out_len: usize,
) -> SynfiltStatus {
    let Some(filtration) = handle.as_ref() else {
        return SynfiltStatus::NullPointer;
    };
    if out.is_null() {
        return SynfiltStatus::NullPointer;
    }
    if out_len != s + 1 {
        return SynfiltStatus::BufferLengthMismatch;
    }
    match filtration.state.state_at(s) {
        Ok(params) => {
            std::slice::from_raw_parts_mut(out, out_len).copy_from_slice(params.alpha());
            SynfiltStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a filtration handle. Null is accepted and ignored.
///
/// # Safety
/// `handle` must originate from this library and not be used after.
#[no_mangle]
pub unsafe extern "C" fn synfilt_filtration_free(handle: *mut SynfiltFiltration) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}
