//! C interface to the `takagi` solver.
//!
//! Every fallible entry point returns a [`TakagiStatus`]. On failure a
//! message is stored per thread and can be read with
//! [`takagi_last_error_message`]. Handles are opaque, created by the library
//! and released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use takagi::disk::{construct, problem_inertia, SolverOptions};
use takagi::error::TakagiError;
use takagi::io::{self, ResultFile};
use takagi::pick::DiskProblem;
use takagi::C64;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TakagiStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// The problem data was rejected (bad nodes, malformed JSON, ...).
    InvalidInput = 2,
    /// The solver finished but its certificate did not pass.
    CertificateFailed = 3,
    /// The numerics broke down.
    NumericalBreakdown = 4,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 5,
    /// The output buffer is too small; the required length was written.
    BufferTooSmall = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// A disk interpolation problem.
pub struct TakagiProblem {
    inner: DiskProblem,
}

/// A solved disk problem together with its certificate.
pub struct TakagiSolution {
    inner: takagi::disk::TakagiSolution,
}

/// Inertia `(positive, negative, zero)` of a Pick matrix.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TakagiInertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(err: &TakagiError) -> TakagiStatus {
    match err.exit_code() {
        1 => TakagiStatus::InvalidInput,
        2 => TakagiStatus::CertificateFailed,
        _ => TakagiStatus::NumericalBreakdown,
    }
}

fn guard(body: impl FnOnce() -> Result<(), TakagiStatus>) -> TakagiStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => TakagiStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("panic inside takagi");
            TakagiStatus::Panic
        }
    }
}

fn fail(err: TakagiError) -> TakagiStatus {
    set_error(err.to_string());
    status_of(&err)
}

fn null(name: &str) -> TakagiStatus {
    set_error(format!("`{name}` is null"));
    TakagiStatus::NullPointer
}

unsafe fn complex_slice(data: *const f64, n: usize, name: &str) -> Result<Vec<C64>, TakagiStatus> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if data.is_null() {
        return Err(null(name));
    }
    let raw = std::slice::from_raw_parts(data, 2 * n);
    Ok(raw.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect())
}

unsafe fn copy_coefficients(coeffs: &[C64], out: *mut f64, capacity: usize, len: *mut usize) -> Result<(), TakagiStatus> {
    if len.is_null() {
        return Err(null("len"));
    }
    *len = coeffs.len();
    if capacity < coeffs.len() {
        set_error(format!("buffer holds {capacity} coefficients, {} needed", coeffs.len()));
        return Err(TakagiStatus::BufferTooSmall);
    }
    if coeffs.is_empty() {
        return Ok(());
    }
    if out.is_null() {
        return Err(null("out"));
    }
    let dst = std::slice::from_raw_parts_mut(out, 2 * coeffs.len());
    for (k, c) in coeffs.iter().enumerate() {
        dst[2 * k] = c.re;
        dst[2 * k + 1] = c.im;
    }
    Ok(())
}

fn options(seed: u64) -> SolverOptions {
    SolverOptions { seed, ..SolverOptions::default() }
}

/// Message of the last failed call on this thread, or null if it succeeded.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn takagi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Default seed used when the caller has no preference.
#[no_mangle]
pub extern "C" fn takagi_default_seed() -> u64 {
    takagi::random::DEFAULT_SEED
}

/// Builds a problem from `n` nodes and `n` values, each an interleaved array
/// of `2n` doubles `(re, im)`.
///
/// # Safety
/// `nodes` and `values` must point to `2n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn takagi_problem_new(
    nodes: *const f64,
    values: *const f64,
    n: usize,
    out: *mut *mut TakagiProblem,
) -> TakagiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let nodes = complex_slice(nodes, n, "nodes")?;
        let values = complex_slice(values, n, "values")?;
        let inner = DiskProblem::new(nodes, values).map_err(fail)?;
        *out = Box::into_raw(Box::new(TakagiProblem { inner }));
        Ok(())
    })
}

/// # Safety
/// `problem` must be null or a handle from [`takagi_problem_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn takagi_problem_free(problem: *mut TakagiProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Number of interpolation nodes, or 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn takagi_problem_len(problem: *const TakagiProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.inner.len())
}

/// Inertia of the Pick matrix with the default threshold.
///
/// # Safety
/// `problem` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn takagi_problem_inertia(problem: *const TakagiProblem, out: *mut TakagiInertia) -> TakagiStatus {
    guard(|| {
        let problem = problem.as_ref().ok_or_else(|| null("problem"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let i = problem_inertia(&problem.inner, &SolverOptions::default()).map_err(fail)?;
        *out = TakagiInertia { positive: i.positive, negative: i.negative, zero: i.zero };
        Ok(())
    })
}

/// Solves `problem`. A solution whose certificate fails is still returned
/// through `out`, together with [`TakagiStatus::CertificateFailed`].
///
/// # Safety
/// `problem` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn takagi_solve(
    problem: *const TakagiProblem,
    seed: u64,
    out: *mut *mut TakagiSolution,
) -> TakagiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let problem = problem.as_ref().ok_or_else(|| null("problem"))?;
        let inner = construct(&problem.inner, &options(seed)).map_err(fail)?;
        let passed = inner.certificate.passed();
        *out = Box::into_raw(Box::new(TakagiSolution { inner }));
        if passed {
            Ok(())
        } else {
            set_error("certificate failed");
            Err(TakagiStatus::CertificateFailed)
        }
    })
}

/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn takagi_solution_free(solution: *mut TakagiSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Whether every certificate check passed. False for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn takagi_solution_passed(solution: *const TakagiSolution) -> bool {
    solution.as_ref().is_some_and(|s| s.inner.certificate.passed())
}

/// Degrees of the zero and pole Blaschke factors of the solution.
///
/// # Safety
/// `solution` must be a live handle; `zeros` and `poles` writable.
#[no_mangle]
pub unsafe extern "C" fn takagi_solution_degrees(
    solution: *const TakagiSolution,
    zeros: *mut usize,
    poles: *mut usize,
) -> TakagiStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        let zeros = zeros.as_mut().ok_or_else(|| null("zeros"))?;
        let poles = poles.as_mut().ok_or_else(|| null("poles"))?;
        *zeros = s.inner.f.degree();
        *poles = s.inner.g.degree();
        Ok(())
    })
}

/// Evaluates the solution at `(re, im)`, writing the result to `out_re`, `out_im`.
///
/// # Safety
/// `solution` must be a live handle; `out_re` and `out_im` writable.
#[no_mangle]
pub unsafe extern "C" fn takagi_solution_eval(
    solution: *const TakagiSolution,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> TakagiStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        let out_re = out_re.as_mut().ok_or_else(|| null("out_re"))?;
        let out_im = out_im.as_mut().ok_or_else(|| null("out_im"))?;
        let v = s.inner.eval(C64::new(re, im));
        *out_re = v.re;
        *out_im = v.im;
        Ok(())
    })
}

/// Copies the numerator coefficients (ascending powers, interleaved `(re, im)`)
/// into `out`, which holds `capacity` complex numbers. `len` receives the
/// number of coefficients even when the buffer is too small.
///
/// # Safety
/// `solution` must be a live handle, `out` must hold `2 * capacity` doubles, `len` writable.
#[no_mangle]
pub unsafe extern "C" fn takagi_solution_numerator(
    solution: *const TakagiSolution,
    out: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> TakagiStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        copy_coefficients(s.inner.interpolant.numerator().coeffs(), out, capacity, len)
    })
}

/// Same as [`takagi_solution_numerator`] for the denominator.
///
/// # Safety
/// See [`takagi_solution_numerator`].
#[no_mangle]
pub unsafe extern "C" fn takagi_solution_denominator(
    solution: *const TakagiSolution,
    out: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> TakagiStatus {
    guard(|| {
        let s = solution.as_ref().ok_or_else(|| null("solution"))?;
        copy_coefficients(s.inner.interpolant.denominator().coeffs(), out, capacity, len)
    })
}

/// Solves a JSON problem document (disk or bidisk) and writes the JSON result
/// document to `out`. Free the string with [`takagi_string_free`]. As with
/// [`takagi_solve`], a failed certificate still produces a document.
///
/// # Safety
/// `problem_json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn takagi_solve_json(problem_json: *const c_char, seed: u64, out: *mut *mut c_char) -> TakagiStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if problem_json.is_null() {
            return Err(null("problem_json"));
        }
        let text = CStr::from_ptr(problem_json).to_str().map_err(|e| {
            set_error(e.to_string());
            TakagiStatus::InvalidUtf8
        })?;
        let file = io::parse_problem(text).map_err(fail)?;
        let result: ResultFile = io::solve_file(&file, &options(seed)).map_err(fail)?;
        let json = result.to_json().map_err(fail)?;
        *out = CString::new(json).map_err(|e| fail(TakagiError::InvalidInput(e.to_string())))?.into_raw();
        if result.passed() {
            Ok(())
        } else {
            set_error("certificate failed");
            Err(TakagiStatus::CertificateFailed)
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn takagi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
