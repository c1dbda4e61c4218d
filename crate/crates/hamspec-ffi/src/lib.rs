//! C ABI over the hamspec library.
//!
//! Matrices cross the boundary as opaque `HsMatrix` handles. Every fallible
//! call returns an [`HsStatus`] code; on failure a message is stored in a
//! thread-local buffer readable with [`hs_last_error`], and out-parameters
//! are left untouched. Pointers returned through out-parameters are owned by
//! the caller and must be released with [`hs_matrix_free`].

use hamspec::stability::default_axis_tol;
use hamspec::{
    apply_rado, build_h_alpha, default_ham_tol, eigenvalues, h_transpose, hamiltonian_residual,
    is_hamiltonian, realize_spectrum, stability_radius_bisection, Error, HamMatrix, Mat,
    PerturbationSpec, Spectrum,
};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::slice;

/// Opaque dense real matrix handle.
pub struct HsMatrix {
    inner: Mat,
}

/// Status code for every fallible entry point. `HS_STATUS_OK` is zero; any
/// other value indicates failure and leaves a message for `hs_last_error`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HsStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Rows/columns inconsistent with the operation.
    Dimension = 2,
    /// Text input could not be parsed.
    Parse = 3,
    /// A spectrum is not closed under negation and conjugation.
    Closure = 4,
    /// An operation needed an even dimension.
    Parity = 5,
    /// A matrix did not have full column rank.
    Rank = 6,
    /// A requested value is not an eigenvalue of the matrix.
    NotAnEigenvalue = 7,
    /// Supplied eigenpairs do not satisfy their defining equation.
    EigenResidual = 8,
    /// An iterative routine failed to converge.
    NonConvergence = 9,
    /// Input outside the operation's domain.
    Domain = 10,
    /// A structural precondition (e.g. Hamiltonian form) failed.
    Structure = 11,
    /// Input exceeds a documented size cap.
    SizeCap = 12,
    /// A bisection bracket could not be established.
    Bracket = 13,
    /// Internal cross-check disagreement; indicates a numerical pathology.
    Inconsistency = 14,
    /// File system failure.
    Io = 15,
    /// A C string was not valid UTF-8.
    Utf8 = 16,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized: Vec<u8> = message.bytes().filter(|&b| b != 0).collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("interior NULs removed");
    });
}

fn fail(status: HsStatus, message: &str) -> HsStatus {
    set_last_error(message);
    status
}

fn fail_null(what: &str) -> HsStatus {
    fail(HsStatus::NullPointer, &format!("{what} must not be null"))
}

fn from_error(e: &Error) -> HsStatus {
    let status = match e {
        Error::Dimension(_) => HsStatus::Dimension,
        Error::Parse(_) => HsStatus::Parse,
        Error::Closure(_) => HsStatus::Closure,
        Error::Parity(_) => HsStatus::Parity,
        Error::Rank(_) => HsStatus::Rank,
        Error::NotAnEigenvalue(_) => HsStatus::NotAnEigenvalue,
        Error::EigenResidual(_) => HsStatus::EigenResidual,
        Error::NonConvergence(_) => HsStatus::NonConvergence,
        Error::Domain(_) => HsStatus::Domain,
        Error::Structure(_) => HsStatus::Structure,
        Error::SizeCap(_) => HsStatus::SizeCap,
        Error::Bracket(_) => HsStatus::Bracket,
        Error::Inconsistency(_) => HsStatus::Inconsistency,
        Error::Io(_) => HsStatus::Io,
    };
    fail(status, &e.to_string())
}

/// Message for the most recent failure on this thread, as a NUL-terminated
/// UTF-8 string. The pointer stays valid until the next failing call on the
/// same thread; never free it. Returns an empty string if nothing failed.
#[no_mangle]
pub extern "C" fn hs_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn path_from(ptr: *const c_char) -> Result<PathBuf, HsStatus> {
    if ptr.is_null() {
        return Err(fail_null("path"));
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(PathBuf::from(s)),
        Err(_) => Err(fail(HsStatus::Utf8, "path is not valid UTF-8")),
    }
}

unsafe fn matrix_ref<'a>(ptr: *const HsMatrix, what: &str) -> Result<&'a Mat, HsStatus> {
    if ptr.is_null() {
        return Err(fail_null(what));
    }
    Ok(&(*ptr).inner)
}

fn hand_out(out: *mut *mut HsMatrix, m: Mat) -> HsStatus {
    let boxed = Box::new(HsMatrix { inner: m });
    unsafe { *out = Box::into_raw(boxed) };
    HsStatus::Ok
}

/// Create a matrix from a row-major buffer of `rows * cols` doubles.
///
/// # Safety
/// `data` must point to at least `rows * cols` readable doubles and `out`
/// must be a valid location to store the new handle.
#[no_mangle]
pub unsafe extern "C" fn hs_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut HsMatrix,
) -> HsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    if rows == 0 || cols == 0 {
        return fail(HsStatus::Dimension, "rows and cols must be positive");
    }
    let Some(len) = rows.checked_mul(cols) else {
        return fail(HsStatus::Dimension, "rows * cols overflows");
    };
    if data.is_null() {
        return fail_null("data");
    }
    let entries = slice::from_raw_parts(data, len);
    hand_out(out, Mat::from_row_slice(rows, cols, entries))
}

/// Deep-copy a matrix handle.
///
/// # Safety
/// `m` must be a live handle and `out` a valid store location.
#[no_mangle]
pub unsafe extern "C" fn hs_matrix_copy(m: *const HsMatrix, out: *mut *mut HsMatrix) -> HsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    let a = match matrix_ref(m, "matrix") {
        Ok(a) => a,
        Err(s) => return s,
    };
    hand_out(out, a.clone())
}

/// Release a handle produced by this library. Null is a no-op.
///
/// # Safety
/// `m` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hs_matrix_free(m: *mut HsMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of rows, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_matrix_rows(m: *const HsMatrix) -> usize {
    if m.is_null() {
        0
    } else {
        (*m).inner.rows()
    }
}

/// Number of columns, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_matrix_cols(m: *const HsMatrix) -> usize {
    if m.is_null() {
        0
    } else {
        (*m).inner.cols()
    }
}

/// Read one entry.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_matrix_get(
    m: *const HsMatrix,
    row: usize,
    col: usize,
    out: *mut f64,
) -> HsStatus {
    let a = match matrix_ref(m, "matrix") {
        Ok(a) => a,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail_null("out");
    }
    if row >= a.rows() || col >= a.cols() {
        return fail(
            HsStatus::Dimension,
            &format!(
                "index ({row}, {col}) outside a {}x{} matrix",
                a.rows(),
                a.cols()
            ),
        );
    }
    *out = a[(row, col)];
    HsStatus::Ok
}

/// Copy all entries row-major into `out`, which must hold rows*cols doubles.
///
/// # Safety
/// `m` must be a live handle; `out` must have space for rows*cols doubles.
#[no_mangle]
pub unsafe extern "C" fn hs_matrix_data(m: *const HsMatrix, out: *mut f64) -> HsStatus {
    let a = match matrix_ref(m, "matrix") {
        Ok(a) => a,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail_null("out");
    }
    let dst = slice::from_raw_parts_mut(out, a.rows() * a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            dst[i * a.cols() + j] = a[(i, j)];
        }
    }
    HsStatus::Ok
}

/// Read a matrix from a headerless CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid store location.
#[no_mangle]
pub unsafe extern "C" fn hs_matrix_read_csv(
    path: *const c_char,
    out: *mut *mut HsMatrix,
) -> HsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    let path = match path_from(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match hamspec::io::read_matrix_csv(&path) {
        Ok(m) => hand_out(out, m),
        Err(e) => from_error(&e),
    }
}

/// Write a matrix as headerless CSV with round-trip-exact number formatting.
///
/// # Safety
/// `path` must be a NUL-terminated string and `m` a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_matrix_write_csv(path: *const c_char, m: *const HsMatrix) -> HsStatus {
    let a = match matrix_ref(m, "matrix") {
        Ok(a) => a,
        Err(s) => return s,
    };
    let path = match path_from(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match hamspec::io::write_matrix_csv(&path, a) {
        Ok(()) => HsStatus::Ok,
        Err(e) => from_error(&e),
    }
}

/// The 2n x 2n block matrix [[0, I], [-I, 0]].
///
/// # Safety
/// `out` must be a valid store location.
#[no_mangle]
pub unsafe extern "C" fn hs_build_j(half_dim: usize, out: *mut *mut HsMatrix) -> HsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    if half_dim == 0 {
        return fail(HsStatus::Dimension, "half_dim must be positive");
    }
    hand_out(out, hamspec::build_j(half_dim))
}

/// The symplectic transpose J A^T J (both dimensions must be even).
///
/// # Safety
/// `m` must be a live handle and `out` a valid store location.
#[no_mangle]
pub unsafe extern "C" fn hs_h_transpose(m: *const HsMatrix, out: *mut *mut HsMatrix) -> HsStatus {
    let a = match matrix_ref(m, "matrix") {
        Ok(a) => a,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail_null("out");
    }
    match h_transpose(a) {
        Ok(t) => hand_out(out, t),
        Err(e) => from_error(&e),
    }
}

/// The structure residual ||A^T J + J A||_F (zero exactly for Hamiltonian A).
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hs_hamiltonian_residual(m: *const HsMatrix, out: *mut f64) -> HsStatus {
    let a = match matrix_ref(m, "matrix") {
        Ok(a) => a,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail_null("out");
    }
    match hamiltonian_residual(a) {
        Ok(r) => {
            *out = r;
            HsStatus::Ok
        }
        Err(e) => from_error(&e),
    }
}

/// Scale-aware default tolerance for the structure test, or NaN for a null
/// handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_default_ham_tol(m: *const HsMatrix) -> f64 {
    if m.is_null() {
        f64::NAN
    } else {
        hamspec::default_ham_tol(&(*m).inner)
    }
}

/// Structure test: writes 1 or 0 to `out_is` and the residual to
/// `out_residual` (either may be null to skip it). Pass a negative `tol` to
/// use the scale-aware default, as with `hs_has_imaginary_axis_eigenvalue`.
///
/// # Safety
/// `m` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_is_hamiltonian(
    m: *const HsMatrix,
    tol: f64,
    out_is: *mut i32,
    out_residual: *mut f64,
) -> HsStatus {
    let a = match matrix_ref(m, "matrix") {
        Ok(a) => a,
        Err(s) => return s,
    };
    let tol = if tol < 0.0 { default_ham_tol(a) } else { tol };
    match is_hamiltonian(a, tol) {
        Ok((flag, residual)) => {
            if !out_is.is_null() {
                *out_is = i32::from(flag);
            }
            if !out_residual.is_null() {
                *out_residual = residual;
            }
            HsStatus::Ok
        }
        Err(e) => from_error(&e),
    }
}

/// Eigenvalues of a square matrix. `out_re` and `out_im` must each hold
/// `hs_matrix_rows(m)` doubles; entry k of each receives the k-th eigenvalue.
///
/// # Safety
/// `m` must be a live handle; both out-arrays must have row-count capacity.
#[no_mangle]
pub unsafe extern "C" fn hs_eigenvalues(
    m: *const HsMatrix,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HsStatus {
    let a = match matrix_ref(m, "matrix") {
        Ok(a) => a,
        Err(s) => return s,
    };
    if out_re.is_null() || out_im.is_null() {
        return fail_null("out_re/out_im");
    }
    match eigenvalues(a) {
        Ok(result) => {
            let re = slice::from_raw_parts_mut(out_re, result.values.len());
            let im = slice::from_raw_parts_mut(out_im, result.values.len());
            for (k, z) in result.values.iter().enumerate() {
                re[k] = z.re;
                im[k] = z.im;
            }
            HsStatus::Ok
        }
        Err(e) => from_error(&e),
    }
}

/// Build a Hamiltonian matrix whose spectrum is the given values (closed
/// under negation and conjugation; `len` must be even).
///
/// # Safety
/// `re` and `im` must point to `len` readable doubles; `out` must be a valid
/// store location.
#[no_mangle]
pub unsafe extern "C" fn hs_realize_spectrum(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut HsMatrix,
) -> HsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    if re.is_null() || im.is_null() {
        return fail_null("re/im");
    }
    let re = slice::from_raw_parts(re, len);
    let im = slice::from_raw_parts(im, len);
    let values: Vec<Complex64> = re
        .iter()
        .zip(im)
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect();
    let spectrum = match Spectrum::from_values(values) {
        Ok(s) => s,
        Err(e) => return from_error(&e),
    };
    match realize_spectrum(&spectrum) {
        Ok(h) => hand_out(out, h.into_body()),
        Err(e) => from_error(&e),
    }
}

/// Apply the structured update A + X C X^H. `a` and `core` must be
/// Hamiltonian; the columns of `x` must solve A X = X Omega.
///
/// # Safety
/// All four input handles must be live; `out` must be a valid store
/// location.
#[no_mangle]
pub unsafe extern "C" fn hs_apply_rado(
    a: *const HsMatrix,
    x: *const HsMatrix,
    omega: *const HsMatrix,
    core: *const HsMatrix,
    out: *mut *mut HsMatrix,
) -> HsStatus {
    if out.is_null() {
        return fail_null("out");
    }
    let (a, x, omega, core) = match (
        matrix_ref(a, "a"),
        matrix_ref(x, "x"),
        matrix_ref(omega, "omega"),
        matrix_ref(core, "core"),
    ) {
        (Ok(a), Ok(x), Ok(o), Ok(c)) => (a, x, o, c),
        (Err(s), ..) | (_, Err(s), ..) | (_, _, Err(s), _) | (.., Err(s)) => return s,
    };
    let run = || -> hamspec::Result<Mat> {
        let a = HamMatrix::certify(a.clone())?;
        let core = HamMatrix::certify(core.clone())?;
        let spec = PerturbationSpec::new(x.clone(), omega.clone(), core)?;
        let report = apply_rado(&a, &spec)?;
        Ok(report.updated.into_body())
    };
    match run() {
        Ok(updated) => hand_out(out, updated),
        Err(e) => from_error(&e),
    }
}

/// Assemble the augmented test matrix [[A, -alpha I], [alpha I, -A^T]].
///
/// # Safety
/// `a` must be a live handle and `out` a valid store location.
#[no_mangle]
pub unsafe extern "C" fn hs_build_h_alpha(
    a: *const HsMatrix,
    alpha: f64,
    out: *mut *mut HsMatrix,
) -> HsStatus {
    let a = match matrix_ref(a, "a") {
        Ok(a) => a,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail_null("out");
    }
    match build_h_alpha(a, alpha) {
        Ok(sys) => hand_out(out, sys.h().body().clone()),
        Err(e) => from_error(&e),
    }
}

/// Does the (Hamiltonian) matrix have an eigenvalue with |Re| <= tol?
/// Pass a negative `tol` to use the scale-aware default. Writes 1/0 to
/// `out_has` and the smallest |Re| found to `out_min_abs_real` (either may
/// be null to skip it).
///
/// # Safety
/// `h` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_has_imaginary_axis_eigenvalue(
    h: *const HsMatrix,
    tol: f64,
    out_has: *mut i32,
    out_min_abs_real: *mut f64,
) -> HsStatus {
    let body = match matrix_ref(h, "h") {
        Ok(a) => a,
        Err(s) => return s,
    };
    let certified = match HamMatrix::certify(body.clone()) {
        Ok(c) => c,
        Err(e) => return from_error(&e),
    };
    let tol = if tol < 0.0 {
        default_axis_tol(&certified)
    } else {
        tol
    };
    match hamspec::has_imaginary_axis_eigenvalue(&certified, tol) {
        Ok(test) => {
            if !out_has.is_null() {
                *out_has = i32::from(test.on_axis);
            }
            if !out_min_abs_real.is_null() {
                *out_min_abs_real = test.min_abs_real;
            }
            HsStatus::Ok
        }
        Err(e) => from_error(&e),
    }
}

/// Bracket the stability radius by bisection. Pass `alpha_max <= 0` to grow
/// the upper endpoint automatically. A spectrum already touching the axis is
/// reported as `HS_STATUS_DOMAIN` (the radius is zero).
///
/// # Safety
/// `a` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_stability_radius(
    a: *const HsMatrix,
    tol: f64,
    alpha_max: f64,
    out_lower: *mut f64,
    out_upper: *mut f64,
    out_iterations: *mut usize,
) -> HsStatus {
    let a = match matrix_ref(a, "a") {
        Ok(a) => a,
        Err(s) => return s,
    };
    let cap = if alpha_max > 0.0 {
        Some(alpha_max)
    } else {
        None
    };
    match stability_radius_bisection(a, tol, cap) {
        Ok(result) => {
            if let Some(diagnostic) = result.diagnostic {
                return fail(HsStatus::Domain, &diagnostic);
            }
            if !out_lower.is_null() {
                *out_lower = result.lower;
            }
            if !out_upper.is_null() {
                *out_upper = result.upper;
            }
            if !out_iterations.is_null() {
                *out_iterations = result.iterations;
            }
            HsStatus::Ok
        }
        Err(e) => from_error(&e),
    }
}
