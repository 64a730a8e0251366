//! C ABI for the `twoband` library.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free` function. Every fallible call returns a
//! [`TbStatus`] and writes its result through an out pointer. On failure a
//! description is available from [`tb_last_error_message`] on the same
//! thread until the next call.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use num_complex::Complex64;
use twoband::io::parse_instance;
use twoband::spectrum::{predicted_counts, structured_eigenvalues, SpectrumReport};
use twoband::verify::{verify, VerifyConfig};
use twoband::{BandMatrix, Error, Mode};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    ComputationFailed = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TbMode {
    Positive = 0,
    Nonnegative = 1,
    Complex = 2,
}

fn mode_from_int(m: c_int) -> Option<Mode> {
    match m {
        x if x == TbMode::Positive as c_int => Some(Mode::PositiveReal),
        x if x == TbMode::Nonnegative as c_int => Some(Mode::NonnegativeReal),
        x if x == TbMode::Complex as c_int => Some(Mode::Complex),
        _ => None,
    }
}

/// Opaque two-band matrix.
pub struct TbBandMatrix(BandMatrix);

/// Opaque structured spectrum report.
pub struct TbSpectrum(SpectrumReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: TbStatus, msg: impl Into<String>) -> TbStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> TbStatus {
    let status = if e.is_input_error() {
        TbStatus::InvalidInput
    } else {
        TbStatus::ComputationFailed
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into [`TbStatus::Panic`] and clearing the last
/// error on success.
fn guard(f: impl FnOnce() -> TbStatus) -> TbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(TbStatus::Ok) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TbStatus::Ok
        }
        Ok(status) => status,
        Err(_) => fail(TbStatus::Panic, "internal panic"),
    }
}

/// # Safety
/// `ptr` must be null or point to `len` readable values.
unsafe fn read_slice<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if len == 0 {
        Some(&[])
    } else if ptr.is_null() {
        None
    } else {
        Some(slice::from_raw_parts(ptr, len))
    }
}

/// # Safety
/// `re` must point to `len` values; `im` must be null or point to `len` values.
unsafe fn read_band(re: *const f64, im: *const f64, len: usize) -> Option<Vec<Complex64>> {
    let re = read_slice(re, len)?;
    let im = if im.is_null() {
        None
    } else {
        Some(read_slice(im, len)?)
    };
    Some(
        (0..len)
            .map(|i| Complex64::new(re[i], im.map_or(0.0, |v| v[i])))
            .collect(),
    )
}

/// Builds a matrix of order `n` with band offsets `b` (lower) and `k`
/// (upper). `mode` is a [`TbMode`] value. `lower_re` holds `max(n - b, 0)`
/// entries and `upper_re` `max(n - k, 0)`; the imaginary arrays may be null
/// for real entries.
///
/// # Safety
/// Every non-null array must hold the stated number of doubles; `out` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_band_matrix_new(
    n: usize,
    b: usize,
    k: usize,
    mode: c_int,
    lower_re: *const f64,
    lower_im: *const f64,
    lower_len: usize,
    upper_re: *const f64,
    upper_im: *const f64,
    upper_len: usize,
    out: *mut *mut TbBandMatrix,
) -> TbStatus {
    guard(|| {
        if out.is_null() {
            return fail(TbStatus::NullPointer, "out is null");
        }
        let Some(mode) = mode_from_int(mode) else {
            return fail(TbStatus::InvalidInput, format!("unknown mode {mode}"));
        };
        let (Some(lower), Some(upper)) = (
            read_band(lower_re, lower_im, lower_len),
            read_band(upper_re, upper_im, upper_len),
        ) else {
            return fail(TbStatus::NullPointer, "band array is null");
        };
        match BandMatrix::new(n, b, k, lower, upper, mode) {
            Ok(bm) => {
                *out = Box::into_raw(Box::new(TbBandMatrix(bm)));
                TbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Parses an explicit or generator instance from NUL-terminated JSON.
///
/// # Safety
/// `json` must be a valid C string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_band_matrix_from_json(
    json: *const c_char,
    out: *mut *mut TbBandMatrix,
) -> TbStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(TbStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(TbStatus::InvalidInput, "input is not UTF-8");
        };
        match parse_instance(text) {
            Ok(bm) => {
                *out = Box::into_raw(Box::new(TbBandMatrix(bm)));
                TbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tb_band_matrix_free(m: *mut TbBandMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `n` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_band_matrix_order(m: *const TbBandMatrix, n: *mut usize) -> TbStatus {
    guard(|| {
        if m.is_null() || n.is_null() {
            return fail(TbStatus::NullPointer, "null argument");
        }
        *n = (*m).0.n();
        TbStatus::Ok
    })
}

/// Structured spectrum of `m`.
///
/// # Safety
/// `m` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_analyze(m: *const TbBandMatrix, out: *mut *mut TbSpectrum) -> TbStatus {
    guard(|| {
        if m.is_null() || out.is_null() {
            return fail(TbStatus::NullPointer, "null argument");
        }
        match structured_eigenvalues(&(*m).0, &Default::default()) {
            Ok(rep) => {
                *out = Box::into_raw(Box::new(TbSpectrum(rep)));
                TbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tb_spectrum_free(s: *mut TbSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Period `p`, gcd `g` and zero multiplicity of a spectrum. Any out pointer
/// may be null.
///
/// # Safety
/// `s` must be a live handle; non-null out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tb_spectrum_counts(
    s: *const TbSpectrum,
    p: *mut usize,
    g: *mut usize,
    zero_multiplicity: *mut usize,
) -> TbStatus {
    guard(|| {
        if s.is_null() {
            return fail(TbStatus::NullPointer, "spectrum is null");
        }
        let rep = &(*s).0;
        if !p.is_null() {
            *p = rep.p;
        }
        if !g.is_null() {
            *g = rep.g;
        }
        if !zero_multiplicity.is_null() {
            *zero_multiplicity = rep.zero_multiplicity;
        }
        TbStatus::Ok
    })
}

/// Copies the `n` eigenvalues into `re` and `im` (each of capacity `cap`).
/// `len` receives `n` even when the buffers are too small.
///
/// # Safety
/// `s` must be a live handle; `re` and `im` must hold `cap` doubles; `len`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_spectrum_eigenvalues(
    s: *const TbSpectrum,
    re: *mut f64,
    im: *mut f64,
    cap: usize,
    len: *mut usize,
) -> TbStatus {
    guard(|| {
        if s.is_null() || len.is_null() {
            return fail(TbStatus::NullPointer, "null argument");
        }
        let values = &(*s).0.eigenvalues.values;
        *len = values.len();
        if values.is_empty() {
            return TbStatus::Ok;
        }
        if cap < values.len() {
            return fail(
                TbStatus::BufferTooSmall,
                format!("need {} slots, have {cap}", values.len()),
            );
        }
        if re.is_null() || im.is_null() {
            return fail(TbStatus::NullPointer, "output buffer is null");
        }
        for (i, z) in values.iter().enumerate() {
            *re.add(i) = z.re;
            *im.add(i) = z.im;
        }
        TbStatus::Ok
    })
}

/// Copies the radii of ray `j` (descending) into `out`. `len` receives the
/// count even when `out` is too small.
///
/// # Safety
/// `s` must be a live handle; `out` must hold `cap` doubles; `len` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_spectrum_radii(
    s: *const TbSpectrum,
    j: usize,
    out: *mut f64,
    cap: usize,
    len: *mut usize,
) -> TbStatus {
    guard(|| {
        if s.is_null() || len.is_null() {
            return fail(TbStatus::NullPointer, "null argument");
        }
        let rep = &(*s).0;
        let Some(ray) = rep.rays.get(j) else {
            return fail(
                TbStatus::InvalidInput,
                format!("ray {j} outside 0..{}", rep.p),
            );
        };
        *len = ray.radii.len();
        if ray.radii.is_empty() {
            return TbStatus::Ok;
        }
        if cap < ray.radii.len() {
            return fail(
                TbStatus::BufferTooSmall,
                format!("need {} slots, have {cap}", ray.radii.len()),
            );
        }
        if out.is_null() {
            return fail(TbStatus::NullPointer, "output buffer is null");
        }
        ptr::copy_nonoverlapping(ray.radii.as_ptr(), out, ray.radii.len());
        TbStatus::Ok
    })
}

/// The report as a JSON string, to be released with [`tb_string_free`].
///
/// # Safety
/// `s` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_spectrum_to_json(s: *const TbSpectrum, out: *mut *mut c_char) -> TbStatus {
    guard(|| {
        if s.is_null() || out.is_null() {
            return fail(TbStatus::NullPointer, "null argument");
        }
        write_json(&(*s).0, out)
    })
}

unsafe fn write_json(value: &impl serde::Serialize, out: *mut *mut c_char) -> TbStatus {
    match serde_json::to_string(value) {
        Ok(text) => match CString::new(text) {
            Ok(c) => {
                *out = c.into_raw();
                TbStatus::Ok
            }
            Err(e) => fail(TbStatus::ComputationFailed, e.to_string()),
        },
        Err(e) => fail(TbStatus::ComputationFailed, e.to_string()),
    }
}

/// Checks the structured spectrum against the dense eigensolver. `passed`
/// receives 1 or 0; `report_json`, when non-null, receives the full report
/// (free with [`tb_string_free`]). A mismatch is not an error: the status is
/// `TB_STATUS_OK` and `passed` is 0.
///
/// # Safety
/// `m` must be a live handle; `passed` must be valid; `report_json` must be
/// null or valid.
#[no_mangle]
pub unsafe extern "C" fn tb_verify(
    m: *const TbBandMatrix,
    tol: f64,
    zero_tol: f64,
    passed: *mut c_int,
    report_json: *mut *mut c_char,
) -> TbStatus {
    guard(|| {
        if m.is_null() || passed.is_null() {
            return fail(TbStatus::NullPointer, "null argument");
        }
        if !(tol >= 0.0 && zero_tol >= 0.0) {
            return fail(TbStatus::InvalidInput, "tolerances must be nonnegative");
        }
        let cfg = VerifyConfig {
            tol,
            zero_tol,
            ..Default::default()
        };
        match verify(&(*m).0, &cfg) {
            Ok(rep) => {
                *passed = c_int::from(rep.passed);
                if report_json.is_null() {
                    TbStatus::Ok
                } else {
                    write_json(&rep, report_json)
                }
            }
            Err(e) => from_error(e),
        }
    })
}

/// Closed-form multiplicity of the zero eigenvalue for `(n, b, k)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tb_predicted_zero_multiplicity(
    n: usize,
    b: usize,
    k: usize,
    out: *mut usize,
) -> TbStatus {
    guard(|| {
        if out.is_null() {
            return fail(TbStatus::NullPointer, "out is null");
        }
        match predicted_counts(n, b, k) {
            Ok(c) => {
                *out = c.zero_multiplicity;
                TbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn tb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn tb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
