//! C ABI for `frame-lab`.
//!
//! Vector systems cross the boundary as opaque [`FlSystem`] handles that
//! the caller releases with [`fl_system_free`]. Every function returns an
//! [`FlStatus`]; on failure [`fl_last_error_message`] describes the cause.
//! Coordinates are row-major: vector `i` occupies `coords[i*dim .. (i+1)*dim]`.
//! Panics never unwind into the caller; they surface as `FL_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use frame_lab::bounds::bounds_report;
use frame_lab::frame::{frame_potential, tightness_defect};
use frame_lab::objective::evaluate;
use frame_lab::optimizer::{optimize, OptimizerConfig};
use frame_lab::untf::{build_untf, random_system, BuildRequest};
use frame_lab::{FrameError, NormConstraints, VectorSystem};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Parameters outside the domain of the requested quantity.
    Domain = 3,
    Infeasible = 4,
    NotConverged = 5,
    /// A ratio of the form 0/0.
    Indeterminate = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Opaque vector system.
pub struct FlSystem {
    inner: VectorSystem,
}

/// Closed-form values for one parameter set. `has_*` flags mark which
/// optional values are present; absent values are set to 0.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FlBounds {
    /// Optimum at zero noise; `INFINITY` when `count <= dim`.
    pub sigma0_value: f64,
    pub uniform_argmin_c: f64,
    pub uniform_value: f64,
    pub uniform_answer: f64,
    pub welch_value: f64,
    pub count_bound_valid: bool,
    pub count_bound: f64,
    pub has_max_nonminimal_count: bool,
    pub max_nonminimal_count: u64,
    pub mu_condition_holds: bool,
    pub has_mu_upper: bool,
    pub mu_upper: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(err: &FrameError) -> FlStatus {
    match err {
        FrameError::InvalidSystem(_)
        | FrameError::IndexOutOfRange { .. }
        | FrameError::InvalidLambda(_)
        | FrameError::InvalidFactor(_)
        | FrameError::Io(_)
        | FrameError::Parse(_) => FlStatus::InvalidArgument,
        FrameError::IndeterminateRatio(_) => FlStatus::Indeterminate,
        FrameError::ZeroTrace | FrameError::Domain(_) => FlStatus::Domain,
        FrameError::Infeasible { .. } => FlStatus::Infeasible,
        FrameError::NotConverged { .. } => FlStatus::NotConverged,
    }
}

/// Runs `body`, recording any error or panic as the thread's last error.
fn guard(body: impl FnOnce() -> Result<(), (FlStatus, String)>) -> FlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            FlStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {message}"));
            FlStatus::Panic
        }
    }
}

fn fail(err: FrameError) -> (FlStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (FlStatus, String) {
    (FlStatus::NullPointer, format!("{what} is null"))
}

unsafe fn system_ref<'a>(handle: *const FlSystem) -> Result<&'a VectorSystem, (FlStatus, String)> {
    handle.as_ref().map(|h| &h.inner).ok_or_else(|| null("system handle"))
}

unsafe fn store_system(out: *mut *mut FlSystem, inner: VectorSystem) {
    *out = Box::into_raw(Box::new(FlSystem { inner }));
}

/// Static description of a status code (an `FlStatus` value). Never null.
#[no_mangle]
pub extern "C" fn fl_status_message(status: i32) -> *const c_char {
    const STATUSES: [FlStatus; 9] = [
        FlStatus::Ok,
        FlStatus::NullPointer,
        FlStatus::InvalidArgument,
        FlStatus::Domain,
        FlStatus::Infeasible,
        FlStatus::NotConverged,
        FlStatus::Indeterminate,
        FlStatus::BufferTooSmall,
        FlStatus::Panic,
    ];
    let Some(&status) = STATUSES.iter().find(|&&s| s as i32 == status) else {
        return b"unknown status\0".as_ptr().cast();
    };
    let text: &'static [u8] = match status {
        FlStatus::Ok => b"ok\0",
        FlStatus::NullPointer => b"null pointer argument\0",
        FlStatus::InvalidArgument => b"invalid argument\0",
        FlStatus::Domain => b"parameters outside the domain\0",
        FlStatus::Infeasible => b"system violates the norm constraints\0",
        FlStatus::NotConverged => b"iteration did not converge\0",
        FlStatus::Indeterminate => b"indeterminate ratio\0",
        FlStatus::BufferTooSmall => b"output buffer too small\0",
        FlStatus::Panic => b"internal panic\0",
    };
    text.as_ptr().cast()
}

/// Message of the last failed call on this thread, or "" after a success.
/// The pointer stays valid until the next `fl_*` call on the same thread.
#[no_mangle]
pub extern "C" fn fl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Copies `dim * count` row-major coordinates into a new system.
///
/// # Safety
/// `coords` must point to `dim * count` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_system_new(dim: usize, count: usize, coords: *const f64, out: *mut *mut FlSystem) -> FlStatus {
    guard(|| {
        if coords.is_null() {
            return Err(null("coords"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let len = dim
            .checked_mul(count)
            .ok_or((FlStatus::InvalidArgument, "dim * count overflows".to_string()))?;
        let data = std::slice::from_raw_parts(coords, len).to_vec();
        let vs = VectorSystem::from_flat(dim, data).map_err(fail)?;
        store_system(out, vs);
        Ok(())
    })
}

/// Releases a system. Null is ignored.
///
/// # Safety
/// `system` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fl_system_free(system: *mut FlSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Dimension of the system, or 0 for a null handle.
///
/// # Safety
/// `system` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_system_dim(system: *const FlSystem) -> usize {
    system.as_ref().map_or(0, |s| s.inner.dim())
}

/// Number of vectors, or 0 for a null handle.
///
/// # Safety
/// `system` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_system_count(system: *const FlSystem) -> usize {
    system.as_ref().map_or(0, |s| s.inner.count())
}

/// Copies the row-major coordinates into `out`, which holds `len` doubles.
///
/// # Safety
/// `system` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fl_system_copy_coords(system: *const FlSystem, out: *mut f64, len: usize) -> FlStatus {
    guard(|| {
        let vs = system_ref(system)?;
        copy_out(vs.as_flat(), out, len)
    })
}

unsafe fn copy_out(values: &[f64], out: *mut f64, len: usize) -> Result<(), (FlStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    if len < values.len() {
        return Err((
            FlStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", values.len()),
        ));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

/// Random directions with squared norms uniform in `[c1, c2]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_random_system(
    dim: usize,
    count: usize,
    c1: f64,
    c2: f64,
    seed: u64,
    out: *mut *mut FlSystem,
) -> FlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let nc = NormConstraints::new(c1, c2, 0.0).map_err(fail)?;
        store_system(out, random_system(dim, count, &nc, seed).map_err(fail)?);
        Ok(())
    })
}

/// Tight frame of `count` vectors with squared norm `norm2` in dimension `dim`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_build_untf(
    dim: usize,
    count: usize,
    norm2: f64,
    seed: u64,
    out: *mut *mut FlSystem,
) -> FlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let req = BuildRequest::new(dim, count, norm2).with_seed(seed);
        store_system(out, build_untf(&req).map_err(fail)?);
        Ok(())
    })
}

/// Smallest per-vector ratio; `INFINITY` when every ratio is infinite.
///
/// # Safety
/// `system` must be a live handle and `min_value` writable.
#[no_mangle]
pub unsafe extern "C" fn fl_evaluate(system: *const FlSystem, sigma: f64, min_value: *mut f64) -> FlStatus {
    guard(|| {
        let vs = system_ref(system)?;
        if min_value.is_null() {
            return Err(null("min_value"));
        }
        *min_value = evaluate(vs, sigma).map_err(fail)?.min_value.value();
        Ok(())
    })
}

/// Writes the `count` per-vector ratios (`INFINITY` where infinite) into `out`.
///
/// # Safety
/// `system` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fl_ratios(system: *const FlSystem, sigma: f64, out: *mut f64, len: usize) -> FlStatus {
    guard(|| {
        let vs = system_ref(system)?;
        let report = evaluate(vs, sigma).map_err(fail)?;
        let ratios: Vec<f64> = report.ratios.iter().map(|r| r.value()).collect();
        copy_out(&ratios, out, len)
    })
}

/// # Safety
/// `system` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fl_frame_potential(system: *const FlSystem, out: *mut f64) -> FlStatus {
    guard(|| {
        let vs = system_ref(system)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = frame_potential(vs);
        Ok(())
    })
}

/// # Safety
/// `system` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fl_tightness_defect(system: *const FlSystem, out: *mut f64) -> FlStatus {
    guard(|| {
        let vs = system_ref(system)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = tightness_defect(vs).map_err(fail)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_bounds(dim: usize, count: usize, c1: f64, c2: f64, sigma: f64, out: *mut FlBounds) -> FlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let nc = NormConstraints::new(c1, c2, sigma).map_err(fail)?;
        let r = bounds_report(dim, count, &nc).map_err(fail)?;
        *out = FlBounds {
            sigma0_value: r.sigma0_value.value(),
            uniform_argmin_c: r.uniform_argmin_c,
            uniform_value: r.uniform_value,
            uniform_answer: r.uniform_answer,
            welch_value: r.welch_value,
            count_bound_valid: r.count_bound_valid,
            count_bound: r.count_bound.unwrap_or(0.0),
            has_max_nonminimal_count: r.max_nonminimal_count.is_some(),
            max_nonminimal_count: r.max_nonminimal_count.unwrap_or(0),
            mu_condition_holds: r.mu_condition_holds,
            has_mu_upper: r.mu_upper.is_some(),
            mu_upper: r.mu_upper.unwrap_or(0.0),
        };
        Ok(())
    })
}

/// Runs the optimizer with default settings apart from the given ones.
/// `threads == 0` uses every core; the result does not depend on it.
///
/// # Safety
/// `out` and `min_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fl_optimize(
    dim: usize,
    count: usize,
    c1: f64,
    c2: f64,
    sigma: f64,
    seed: u64,
    restarts: usize,
    max_iters: usize,
    threads: usize,
    out: *mut *mut FlSystem,
    min_value: *mut f64,
) -> FlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if min_value.is_null() {
            return Err(null("min_value"));
        }
        let nc = NormConstraints::new(c1, c2, sigma).map_err(fail)?;
        let config = OptimizerConfig { seed, restarts, max_iters, threads, ..OptimizerConfig::default() };
        let result = optimize(dim, count, &nc, &config).map_err(fail)?;
        *min_value = result.best_report.min_value.value();
        store_system(out, result.best_system);
        Ok(())
    })
}
