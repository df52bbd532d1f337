//! C interface to `mvda`.
//!
//! Every entry point returns an [`MvdaStatus`] and writes results through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`mvda_last_error_message`]. Matrices and random streams are opaque
//! handles owned by the caller and released with the matching `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mvda::averages::{evaluate_or_violations, AverageSpec};
use mvda::linalg::{eigvals_hermitian, logdet_abs};
use mvda::measures::{sample_matrix_gamma, SampleStream, SeedSpec};
use mvda::special::{gamma_p_ln, hyp1f1_matrix, pochhammer_gen, zonal_c, GammaPArgs, Partition, TruncationPolicy};
use mvda::{Error, HermitianMatrix};
use num_complex::Complex64;

/// Result codes. The nonzero values 1, 2 and 4 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvdaStatus {
    Ok = 0,
    /// Malformed input: bad shape, non-Hermitian matrix, invalid JSON.
    InvalidArgument = 1,
    /// A moment or function value does not exist for these parameters.
    Domain = 2,
    /// Numerical failure: not positive definite, no convergence, I/O.
    Numeric = 4,
    NullPointer = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// Hermitian matrix handle.
pub struct MvdaMatrix(HermitianMatrix);

/// Deterministic random stream handle.
pub struct MvdaStream(SampleStream);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("no interior nul"));
}

fn status_of(err: &Error) -> MvdaStatus {
    match err.exit_code() {
        1 => MvdaStatus::InvalidArgument,
        2 => MvdaStatus::Domain,
        _ => MvdaStatus::Numeric,
    }
}

fn fail(status: MvdaStatus, msg: impl Into<String>) -> MvdaStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), MvdaStatus>) -> MvdaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MvdaStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(MvdaStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn lift<T>(r: mvda::Result<T>) -> Result<T, MvdaStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), MvdaStatus> {
    if p.is_null() {
        Err(fail(MvdaStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

unsafe fn matrix_ref<'a>(m: *const MvdaMatrix) -> Result<&'a HermitianMatrix, MvdaStatus> {
    non_null(m, "matrix")?;
    Ok(&(*m).0)
}

unsafe fn partition_from(parts: *const u32, len: usize) -> Result<Partition, MvdaStatus> {
    let v = if len == 0 {
        Vec::new()
    } else {
        non_null(parts, "parts")?;
        std::slice::from_raw_parts(parts, len).to_vec()
    };
    lift(Partition::new(v))
}

fn into_c_string(text: String) -> Result<*mut c_char, MvdaStatus> {
    CString::new(text)
        .map(CString::into_raw)
        .map_err(|_| fail(MvdaStatus::InvalidArgument, "output contains a nul byte"))
}

/// Message for the last failure on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mvda_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn mvda_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a `p x p` Hermitian matrix from row-major real and imaginary parts.
/// `im` may be null for a real symmetric matrix.
///
/// # Safety
/// `re` (and `im` when not null) must point to `p * p` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvda_matrix_new(
    p: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut MvdaMatrix,
) -> MvdaStatus {
    guard(|| {
        non_null(re, "re")?;
        non_null(out, "out")?;
        if p == 0 {
            return Err(fail(MvdaStatus::InvalidArgument, "dimension must be at least 1"));
        }
        let n = p.checked_mul(p).ok_or_else(|| fail(MvdaStatus::InvalidArgument, "dimension too large"))?;
        let re = std::slice::from_raw_parts(re, n);
        let data = if im.is_null() {
            re.iter().map(|&x| Complex64::new(x, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, n);
            re.iter().zip(im).map(|(&x, &y)| Complex64::new(x, y)).collect()
        };
        let h = lift(HermitianMatrix::new(p, data))?;
        *out = Box::into_raw(Box::new(MvdaMatrix(h)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library not freed already.
#[no_mangle]
pub unsafe extern "C" fn mvda_matrix_free(m: *mut MvdaMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of `m`, or 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mvda_matrix_dim(m: *const MvdaMatrix) -> usize {
    if m.is_null() {
        0
    } else {
        (*m).0.dim()
    }
}

/// Entry `(i, j)` of `m`.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvda_matrix_get(
    m: *const MvdaMatrix,
    i: usize,
    j: usize,
    re: *mut f64,
    im: *mut f64,
) -> MvdaStatus {
    guard(|| {
        let h = matrix_ref(m)?;
        non_null(re, "re")?;
        non_null(im, "im")?;
        if i >= h.dim() || j >= h.dim() {
            return Err(fail(MvdaStatus::InvalidArgument, format!("index ({i}, {j}) out of range")));
        }
        let z = h.get(i, j);
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// `log |det M|` for positive definite `M`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvda_logdet(m: *const MvdaMatrix, out: *mut f64) -> MvdaStatus {
    guard(|| {
        let h = matrix_ref(m)?;
        non_null(out, "out")?;
        *out = lift(logdet_abs(h))?;
        Ok(())
    })
}

/// Eigenvalues of `m` in descending order, written to `out[0..p]`.
///
/// # Safety
/// `m` must be a live handle; `out` must have room for `mvda_matrix_dim(m)` doubles.
#[no_mangle]
pub unsafe extern "C" fn mvda_eigvals(m: *const MvdaMatrix, out: *mut f64) -> MvdaStatus {
    guard(|| {
        let h = matrix_ref(m)?;
        non_null(out, "out")?;
        let eigs = lift(eigvals_hermitian(h))?;
        ptr::copy_nonoverlapping(eigs.as_ptr(), out, eigs.len());
        Ok(())
    })
}

/// Principal branch of `log Gamma~_p(alpha)` for complex `alpha`.
///
/// # Safety
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvda_gamma_p_ln(
    p: usize,
    alpha_re: f64,
    alpha_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> MvdaStatus {
    guard(|| {
        non_null(out_re, "out_re")?;
        non_null(out_im, "out_im")?;
        let z = lift(gamma_p_ln(&GammaPArgs::new(p, Complex64::new(alpha_re, alpha_im))))?;
        *out_re = z.re;
        *out_im = z.im;
        Ok(())
    })
}

/// Generalized Pochhammer symbol `[a]_kappa`.
///
/// # Safety
/// `parts` must point to `len` non-increasing values (or be null with `len == 0`);
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvda_pochhammer(
    a_re: f64,
    a_im: f64,
    parts: *const u32,
    len: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> MvdaStatus {
    guard(|| {
        non_null(out_re, "out_re")?;
        non_null(out_im, "out_im")?;
        let kappa = partition_from(parts, len)?;
        let z = pochhammer_gen(Complex64::new(a_re, a_im), &kappa);
        *out_re = z.re;
        *out_im = z.im;
        Ok(())
    })
}

/// Zonal polynomial `C~_kappa(M)`.
///
/// # Safety
/// As for [`mvda_pochhammer`]; `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mvda_zonal(parts: *const u32, len: usize, m: *const MvdaMatrix, out: *mut f64) -> MvdaStatus {
    guard(|| {
        let h = matrix_ref(m)?;
        non_null(out, "out")?;
        let kappa = partition_from(parts, len)?;
        *out = lift(zonal_c(&kappa, h))?;
        Ok(())
    })
}

/// `1F1(a; c; M)` truncated at partition weight `max_order` or earlier once
/// `consecutive_orders` orders each add less than `rel_stop` of the sum.
/// `converged` (may be null) receives 1 when the early stop fired.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvda_hyp1f1(
    a: f64,
    c: f64,
    m: *const MvdaMatrix,
    max_order: u32,
    rel_stop: f64,
    consecutive_orders: u32,
    out: *mut f64,
    converged: *mut i32,
) -> MvdaStatus {
    guard(|| {
        let h = matrix_ref(m)?;
        non_null(out, "out")?;
        let policy = TruncationPolicy { max_order, rel_stop, consecutive_orders };
        lift(policy.validate())?;
        let r = lift(hyp1f1_matrix(a, c, h, &policy))?;
        *out = r.value;
        if !converged.is_null() {
            *converged = r.converged as i32;
        }
        Ok(())
    })
}

/// Evaluates an average given as a JSON `AverageSpec` and writes the result
/// document to `out` (free with [`mvda_string_free`]). When the moment does
/// not exist the document lists the violated conditions and the status is
/// `Domain`.
///
/// # Safety
/// `spec_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvda_average_json(spec_json: *const c_char, out: *mut *mut c_char) -> MvdaStatus {
    guard(|| {
        non_null(spec_json, "spec_json")?;
        non_null(out, "out")?;
        let text =
            CStr::from_ptr(spec_json).to_str().map_err(|_| fail(MvdaStatus::InvalidArgument, "spec is not UTF-8"))?;
        let spec: AverageSpec = lift(serde_json::from_str(text).map_err(Error::from))?;
        let result = lift(evaluate_or_violations(&spec))?;
        let doc = lift(serde_json::to_string(&result).map_err(Error::from))?;
        *out = into_c_string(doc)?;
        if result.conditions_ok {
            Ok(())
        } else {
            Err(fail(
                MvdaStatus::Domain,
                format!("moment does not exist: violated {}", result.violated_conditions.join("; ")),
            ))
        }
    })
}

/// Opens stream `stream` of `seed`. Returns null only on allocation failure.
#[no_mangle]
pub extern "C" fn mvda_stream_new(seed: u64, stream: u64) -> *mut MvdaStream {
    Box::into_raw(Box::new(MvdaStream(SampleStream::new(SeedSpec::new(seed, stream)))))
}

/// # Safety
/// `s` must be null or a handle from [`mvda_stream_new`] not freed already.
#[no_mangle]
pub unsafe extern "C" fn mvda_stream_free(s: *mut MvdaStream) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Draws a `p x p` complex matrix-variate gamma `W` with shape `alpha` and
/// unit scale, advancing `stream`.
///
/// # Safety
/// `stream` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mvda_sample_matrix_gamma(
    stream: *mut MvdaStream,
    p: usize,
    alpha: f64,
    out: *mut *mut MvdaMatrix,
) -> MvdaStatus {
    guard(|| {
        non_null(stream, "stream")?;
        non_null(out, "out")?;
        let w = lift(sample_matrix_gamma(p, alpha, &mut (*stream).0))?;
        *out = Box::into_raw(Box::new(MvdaMatrix(w)));
        Ok(())
    })
}
