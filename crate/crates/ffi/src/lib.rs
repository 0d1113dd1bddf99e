//! C ABI over `fundgap`.
//!
//! Every call returns an [`FgStatus`]. On failure the message is kept per thread and can be
//! copied out with [`fg_last_error`]. Handles are opaque and must be released with the
//! matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fundgap::bounds::bound_report;
use fundgap::flow::{clustered_grid, flow_to_stationary, FlowOptions};
use fundgap::pruefer::RobinProblem;
use fundgap::series::{branch_pair, eval_kappa_series_dd, NPoly, SeriesResult};
use fundgap::spectral::{eigen_fd, eigen_shoot, gap};
use fundgap::{Error, ModelParams};

/// Status codes. 2, 3 and 4 match the exit codes of the command line tool.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FgStatus {
    Ok = 0,
    /// Null pointer or an argument outside its enumeration.
    InvalidArgument = 1,
    /// Parameters outside the model's domain, or a hypothesis not met.
    Domain = 2,
    /// An iteration or the flow did not converge.
    Convergence = 3,
    /// No bracket, incomplete coverage or blow-up.
    Bracket = 4,
    /// Output buffer too short; the required size was still written.
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FgMethod {
    Shooting = 0,
    FiniteDifference = 1,
}

/// Which series: the first eigenvalue, the second, or their difference.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FgSeriesKind {
    First = 1,
    Second = 2,
    Gap = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FgEigen {
    pub eigenvalue: f64,
    pub error_estimate: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FgGap {
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: f64,
    /// gap - 3π²/D².
    pub excess: f64,
    pub error_estimate: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FgBounds {
    /// NaN when no lower bound applies.
    pub lower: f64,
    pub upper: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FgFlowResult {
    pub distance: f64,
    /// Riccati residual of the final state, absolute and relative.
    pub residual: f64,
    pub residual_relative: f64,
    pub t: f64,
    pub steps: u64,
}

/// Validated (n, K, D).
pub struct FgParams(ModelParams);

/// Exact series coefficients for both eigenvalues up to a fixed order.
pub struct FgSeries {
    first: SeriesResult,
    second: SeriesResult,
    gap: Vec<NPoly>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> FgStatus {
    match e {
        Error::Pole(_) | Error::Domain(_) | Error::Hypothesis(_) => FgStatus::Domain,
        Error::Bracket(_) | Error::Coverage(_) | Error::Blowup { .. } => FgStatus::Bracket,
        Error::NonConvergence(_)
        | Error::NoConvergence { .. }
        | Error::Solvability { .. }
        | Error::Stability(_)
        | Error::OrderingViolation { .. } => FgStatus::Convergence,
    }
}

enum Fail {
    Status(FgStatus, String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(FgStatus::InvalidArgument, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FgStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            FgStatus::Panic
        }
    }
}

unsafe fn params<'a>(p: *const FgParams) -> Result<&'a ModelParams, Fail> {
    p.as_ref().map(|p| &p.0).ok_or_else(|| null("params"))
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

/// Copies `s` plus a terminating NUL into `buf`, storing the required size in `needed`.
unsafe fn copy_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), Fail> {
    let size = s.len() + 1;
    if !needed.is_null() {
        needed.write(size);
    }
    if buf.is_null() || len < size {
        return Err(Fail::Status(FgStatus::BufferTooSmall, format!("buffer needs {size} bytes")));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    buf.add(s.len()).write(0);
    Ok(())
}

fn index_of(index: u8) -> Result<u8, Fail> {
    match index {
        1 | 2 => Ok(index),
        _ => Err(Fail::Status(FgStatus::InvalidArgument, format!("index must be 1 or 2, got {index}"))),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fg_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => c"",
    };
    VERSION.as_ptr()
}

/// Copies the last error message of this thread into `buf`.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes; `needed` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fg_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> FgStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match copy_str(&msg, buf, len, needed) {
        Ok(()) => FgStatus::Ok,
        Err(_) => FgStatus::BufferTooSmall,
    }
}

/// Validates (n, K, D) and allocates a handle.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fg_params_new(n: u32, k: f64, d: f64, out: *mut *mut FgParams) -> FgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        out.write(ptr::null_mut());
        let p = ModelParams::new(n, k, d)?;
        out.write(Box::into_raw(Box::new(FgParams(p))));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or come from [`fg_params_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fg_params_free(p: *mut FgParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// λ̄₁ or λ̄₂ of the model operator; `method` is an [`FgMethod`].
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_eigenvalue(p: *const FgParams, index: u8, method: u32, out: *mut FgEigen) -> FgStatus {
    guard(|| {
        let p = params(p)?;
        let i = index_of(index)?;
        let r = match method {
            m if m == FgMethod::Shooting as u32 => eigen_shoot(p, i)?,
            m if m == FgMethod::FiniteDifference as u32 => eigen_fd(p, i, 2048)?,
            m => return Err(Fail::Status(FgStatus::InvalidArgument, format!("unknown method {m}"))),
        };
        write(out, FgEigen { eigenvalue: r.eigenvalue, error_estimate: r.error_estimate })
    })
}

/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_gap(p: *const FgParams, out: *mut FgGap) -> FgStatus {
    guard(|| {
        let g = gap(params(p)?)?;
        write(
            out,
            FgGap {
                lambda1: g.lambda1,
                lambda2: g.lambda2,
                gap: g.gap,
                excess: g.excess,
                error_estimate: g.error_estimate,
            },
        )
    })
}

/// Robin constant c_k for the boundary condition ψ(±D/2) = ∓k.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_robin_constant(p: *const FgParams, k: f64, out: *mut f64) -> FgStatus {
    guard(|| {
        let rp = RobinProblem::new(k, params(p)?)?;
        write(out, rp.c_k)
    })
}

/// Lower and upper bounds for λ̄₁ or λ̄₂ (K > 0).
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_bounds(p: *const FgParams, index: u8, out: *mut FgBounds) -> FgStatus {
    guard(|| {
        let r = bound_report(params(p)?, index_of(index)?)?;
        write(out, FgBounds { lower: r.lower.unwrap_or(f64::NAN), upper: r.upper })
    })
}

/// Runs the parabolic flow from the supersolution with shift `s` until the sup distance to
/// the stationary solution drops below `tol`. `cells` = 0 uses the default grid.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_flow(
    p: *const FgParams,
    k: f64,
    s: f64,
    tol: f64,
    cells: usize,
    out: *mut FgFlowResult,
) -> FgStatus {
    guard(|| {
        let p = params(p)?;
        let mut opts = FlowOptions::default();
        if cells > 0 {
            opts.cells = cells;
        }
        let rp = RobinProblem::new(k, p)?;
        let x = clustered_grid(p.half(), opts.cells, opts.ratio, opts.layer_fraction);
        let init = rp.supersolution_on(s, &x)?;
        let (state, d) = flow_to_stationary(&init, k, p, tol, &opts)?;
        write(
            out,
            FgFlowResult {
                distance: d.final_distance,
                residual: d.final_residual.0,
                residual_relative: d.final_residual.1,
                t: state.t,
                steps: d.steps as u64,
            },
        )
    })
}

/// Computes exact series coefficients through `order` (at least 1).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fg_series_new(order: u32, out: *mut *mut FgSeries) -> FgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        out.write(ptr::null_mut());
        if order == 0 {
            return Err(Fail::Status(FgStatus::InvalidArgument, "order must be at least 1".into()));
        }
        let (first, second) = branch_pair(order as usize)?;
        let gap = (0..=order as usize).map(|m| &second.kappa_coeff(m) - &first.kappa_coeff(m)).collect();
        out.write(Box::into_raw(Box::new(FgSeries { first, second, gap })));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or come from [`fg_series_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fg_series_free(s: *mut FgSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Highest order held by the handle, or 0 for null.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fg_series_order(s: *const FgSeries) -> u32 {
    s.as_ref().map_or(0, |s| s.first.max_order() as u32)
}

unsafe fn coeffs(s: *const FgSeries, kind: u32) -> Result<(Vec<NPoly>, usize), Fail> {
    let s = s.as_ref().ok_or_else(|| null("series"))?;
    let c = match kind {
        k if k == FgSeriesKind::First as u32 => s.first.kappa_coeffs(),
        k if k == FgSeriesKind::Second as u32 => s.second.kappa_coeffs(),
        k if k == FgSeriesKind::Gap as u32 => s.gap.clone(),
        k => return Err(Fail::Status(FgStatus::InvalidArgument, format!("unknown series kind {k}"))),
    };
    Ok((c, s.first.max_order()))
}

fn check_order(order: u32, max: usize) -> Result<usize, Fail> {
    if order as usize > max {
        return Err(Fail::Status(FgStatus::InvalidArgument, format!("order {order} exceeds the computed {max}")));
    }
    Ok(order as usize)
}

/// Truncated series at (n, K, D), summed through `order`; `kind` is an [`FgSeriesKind`].
///
/// # Safety
/// `s` and `p` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_series_eval(
    s: *const FgSeries,
    kind: u32,
    p: *const FgParams,
    order: u32,
    out: *mut f64,
) -> FgStatus {
    guard(|| {
        let (c, max) = coeffs(s, kind)?;
        let m = check_order(order, max)?;
        write(out, eval_kappa_series_dd(&c, params(p)?, m).to_f64())
    })
}

/// Exact coefficient of κ^m in D²λ̄ as text, a polynomial in n with coefficients in ℚ[π, 1/π].
///
/// # Safety
/// `s` must be a live handle, `buf` null or `len` writable bytes, `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn fg_series_coefficient(
    s: *const FgSeries,
    kind: u32,
    m: u32,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> FgStatus {
    guard(|| {
        let (c, max) = coeffs(s, kind)?;
        let m = check_order(m, max)?;
        copy_str(&c[m].to_string(), buf, len, needed)
    })
}

/// Exact coefficient of κ^m evaluated at dimension n, as a double.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_series_coefficient_at(
    s: *const FgSeries,
    kind: u32,
    m: u32,
    n: u32,
    out: *mut f64,
) -> FgStatus {
    guard(|| {
        let (c, max) = coeffs(s, kind)?;
        let m = check_order(m, max)?;
        write(out, c[m].eval(i64::from(n)).to_f64())
    })
}
