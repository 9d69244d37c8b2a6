//! C interface to `fraclab`.
//!
//! Grid functions cross the boundary as opaque `FraclabGrid` handles created
//! by `fraclab_grid_new` or `fraclab_grid_read_csv` and released with
//! `fraclab_grid_free`. Every fallible call returns a `FraclabStatus`; the
//! message of the last failure on the calling thread is available from
//! `fraclab_last_error_message`. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use fraclab::bounds;
use fraclab::compactness;
use fraclab::fracderiv::{self, SmoothGridFunction};
use fraclab::fracint;
use fraclab::funcspace::{distribution_function, weak_lp_quasinorm, LpNorm};
use fraclab::special;
use fraclab::{BoundReport, FracError, GridFunction, InequalityId, Interval, VectorNorm};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FraclabStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Regime = 3,
    Unsupported = 4,
    Divergent = 5,
    NotLocated = 6,
    Io = 7,
    Panic = 8,
}

/// Pointwise norm on vector values.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FraclabNorm {
    Euclidean = 0,
    Max = 1,
    Sum = 2,
}

/// Inequality checked by a `FraclabBoundReport`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FraclabInequality {
    IntoItself = 0,
    WeakType = 1,
    StrongCritical = 2,
    StrongSubcritical = 3,
    StrongP1 = 4,
    Chebyshev = 5,
    EmbeddingStrongWeak = 6,
    EmbeddingWeakStrong = 7,
    EmbeddingWeakWeak = 8,
}

/// Flat copy of a bound report. `alpha` is NaN when the inequality has no order.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FraclabBoundReport {
    pub inequality: FraclabInequality,
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub constant_used: f64,
    pub slack: f64,
    pub grid_tolerance: f64,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub t0: f64,
    pub t1: f64,
}

/// Outcome of the non-compactness gap computation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FraclabGapReport {
    pub critical_q: f64,
    pub bound: f64,
    pub measured: f64,
    pub sequence_norm: f64,
}

/// Opaque grid-function handle.
pub struct FraclabGrid {
    inner: GridFunction,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &FracError) -> FraclabStatus {
    match e {
        FracError::Domain(_) | FracError::Format(_) => FraclabStatus::Domain,
        FracError::Regime(_) => FraclabStatus::Regime,
        FracError::UnsupportedClosedForm(_) => FraclabStatus::Unsupported,
        FracError::DivergentIntegral(_) => FraclabStatus::Divergent,
        FracError::NotLocated { .. } => FraclabStatus::NotLocated,
        FracError::Io(_) | FracError::Csv(_) | FracError::Json(_) => FraclabStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Lib(FracError),
}

impl From<FracError> for Failure {
    fn from(e: FracError) -> Self {
        Failure::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FraclabStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FraclabStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            FraclabStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            FraclabStatus::Panic
        }
    }
}

unsafe fn grid_ref<'a>(g: *const FraclabGrid) -> Result<&'a GridFunction, Failure> {
    g.as_ref().map(|h| &h.inner).ok_or(Failure::Null("grid"))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    out.write(v);
    Ok(())
}

fn boxed(g: GridFunction) -> *mut FraclabGrid {
    Box::into_raw(Box::new(FraclabGrid { inner: g }))
}

fn norm_of(n: FraclabNorm) -> VectorNorm {
    match n {
        FraclabNorm::Euclidean => VectorNorm::Euclidean,
        FraclabNorm::Max => VectorNorm::Max,
        FraclabNorm::Sum => VectorNorm::Sum,
    }
}

fn inequality_of(id: InequalityId) -> FraclabInequality {
    match id {
        InequalityId::IntoItself => FraclabInequality::IntoItself,
        InequalityId::WeakType => FraclabInequality::WeakType,
        InequalityId::StrongCritical => FraclabInequality::StrongCritical,
        InequalityId::StrongSubcritical => FraclabInequality::StrongSubcritical,
        InequalityId::StrongP1 => FraclabInequality::StrongP1,
        InequalityId::Chebyshev => FraclabInequality::Chebyshev,
        InequalityId::EmbeddingStrongWeak => FraclabInequality::EmbeddingStrongWeak,
        InequalityId::EmbeddingWeakStrong => FraclabInequality::EmbeddingWeakStrong,
        InequalityId::EmbeddingWeakWeak => FraclabInequality::EmbeddingWeakWeak,
    }
}

impl From<&BoundReport> for FraclabBoundReport {
    fn from(r: &BoundReport) -> Self {
        FraclabBoundReport {
            inequality: inequality_of(r.inequality_id),
            holds: r.holds,
            lhs: r.lhs,
            rhs: r.rhs,
            constant_used: r.constant_used,
            slack: r.slack,
            grid_tolerance: r.grid_tolerance,
            p: r.context.p,
            q: r.context.q,
            alpha: r.context.alpha.unwrap_or(f64::NAN),
            t0: r.context.t0,
            t1: r.context.t1,
        }
    }
}

/// Message of the last failed call on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fraclab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fraclab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds a grid function from `n` nodes and `n * dim` row-major values.
///
/// # Safety
/// `nodes` must point to `n` doubles, `values` to `n * dim` doubles and
/// `out` to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fraclab_grid_new(
    nodes: *const f64,
    values: *const f64,
    n: usize,
    dim: usize,
    norm: FraclabNorm,
    out: *mut *mut FraclabGrid,
) -> FraclabStatus {
    guard(|| {
        if nodes.is_null() {
            return Err(Failure::Null("nodes"));
        }
        if values.is_null() {
            return Err(Failure::Null("values"));
        }
        let len = n.checked_mul(dim).ok_or_else(|| FracError::Domain("n * dim overflows".into()))?;
        let t = std::slice::from_raw_parts(nodes, n).to_vec();
        let v = std::slice::from_raw_parts(values, len).to_vec();
        let g = GridFunction::new(t, v, dim, norm_of(norm))?;
        write_out(out, boxed(g))
    })
}

/// Reads a grid function from a CSV file with header `t,v1,...,vd`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_grid_read_csv(
    path: *const c_char,
    norm: FraclabNorm,
    out: *mut *mut FraclabGrid,
) -> FraclabStatus {
    guard(|| {
        if path.is_null() {
            return Err(Failure::Null("path"));
        }
        let s = CStr::from_ptr(path).to_str().map_err(|_| FracError::Domain("path is not valid UTF-8".into()))?;
        let g = GridFunction::read_csv_path(Path::new(s), norm_of(norm))?;
        write_out(out, boxed(g))
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `grid` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fraclab_grid_free(grid: *mut FraclabGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Number of nodes, or 0 for NULL.
///
/// # Safety
/// `grid` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fraclab_grid_len(grid: *const FraclabGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.inner.len())
}

/// Value dimension, or 0 for NULL.
///
/// # Safety
/// `grid` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fraclab_grid_dim(grid: *const FraclabGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.inner.dim())
}

/// Copies the nodes into `out`, which holds `cap` doubles.
///
/// # Safety
/// `out` must point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fraclab_grid_copy_nodes(grid: *const FraclabGrid, out: *mut f64, cap: usize) -> FraclabStatus {
    guard(|| copy_into(grid_ref(grid)?.nodes(), out, cap))
}

/// Copies the `len * dim` row-major values into `out`, which holds `cap` doubles.
///
/// # Safety
/// `out` must point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fraclab_grid_copy_values(
    grid: *const FraclabGrid,
    out: *mut f64,
    cap: usize,
) -> FraclabStatus {
    guard(|| copy_into(grid_ref(grid)?.values(), out, cap))
}

unsafe fn copy_into(src: &[f64], out: *mut f64, cap: usize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    if cap < src.len() {
        return Err(FracError::Domain(format!("buffer holds {cap} values, need {}", src.len())).into());
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

/// `J^α` of a grid function on its own nodes; `use_fft` selects the FFT backend.
///
/// # Safety
/// `grid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_rl_integral(
    grid: *const FraclabGrid,
    alpha: f64,
    use_fft: bool,
    out: *mut *mut FraclabGrid,
) -> FraclabStatus {
    guard(|| {
        let g = grid_ref(grid)?;
        let image =
            if use_fft { fracint::rl_integral_grid_fft(g, alpha)? } else { fracint::rl_integral_grid(g, alpha)? };
        write_out(out, boxed(image))
    })
}

/// Riemann–Liouville derivative of order `alpha ∈ (0, 1)`.
///
/// # Safety
/// `grid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_rl_derivative(
    grid: *const FraclabGrid,
    alpha: f64,
    out: *mut *mut FraclabGrid,
) -> FraclabStatus {
    guard(|| write_out(out, boxed(fracderiv::rl_derivative(grid_ref(grid)?, alpha)?)))
}

/// Caputo derivative, with `f'` estimated from the samples.
///
/// # Safety
/// `grid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_caputo_derivative(
    grid: *const FraclabGrid,
    alpha: f64,
    out: *mut *mut FraclabGrid,
) -> FraclabStatus {
    guard(|| {
        let smooth = SmoothGridFunction::from_samples(grid_ref(grid)?.clone())?;
        write_out(out, boxed(fracderiv::caputo_derivative(&smooth, alpha)?))
    })
}

/// `||f||_p` over the grid interval; `p` may be infinite.
///
/// # Safety
/// `grid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_lp_norm(grid: *const FraclabGrid, p: f64, out: *mut f64) -> FraclabStatus {
    guard(|| write_out(out, grid_ref(grid)?.lp_norm_on(p, None)?))
}

/// Weak quasi-norm `sup_r r μ{|f| > r}^{1/p}`.
///
/// # Safety
/// `grid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_weak_norm(grid: *const FraclabGrid, p: f64, out: *mut f64) -> FraclabStatus {
    guard(|| write_out(out, weak_lp_quasinorm(grid_ref(grid)?, p)?))
}

/// Distribution function `μ{t : |f(t)| > r}` for `r > 0`.
///
/// # Safety
/// `grid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_distribution(grid: *const FraclabGrid, r: f64, out: *mut f64) -> FraclabStatus {
    guard(|| write_out(out, distribution_function(grid_ref(grid)?, r)?))
}

/// `ln Γ(x)` for `x > 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_log_gamma(x: f64, out: *mut f64) -> FraclabStatus {
    guard(|| write_out(out, special::log_gamma(x)?))
}

/// Weak-type constant `K_{α,p}`, defined for `0 < α < 1/p`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_weak_constant(alpha: f64, p: f64, out: *mut f64) -> FraclabStatus {
    guard(|| write_out(out, bounds::weak_type_constant(alpha, p)?))
}

/// Strong-type constant `C_{α,p}` from the default interpolation search, `1 < p < 1/α`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_strong_constant(alpha: f64, p: f64, out: *mut f64) -> FraclabStatus {
    guard(|| write_out(out, bounds::strong_type_constant(alpha, p, bounds::DEFAULT_SEARCH_GRID)?.0))
}

/// Checks the weak-type inequality for one function.
///
/// # Safety
/// `grid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_verify_weak(
    grid: *const FraclabGrid,
    alpha: f64,
    p: f64,
    out: *mut FraclabBoundReport,
) -> FraclabStatus {
    guard(|| write_out(out, (&bounds::verify_weak_type(grid_ref(grid)?, alpha, p)?).into()))
}

/// Checks the strong-type inequality into `L^q` for one function.
///
/// # Safety
/// `grid` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_verify_strong(
    grid: *const FraclabGrid,
    alpha: f64,
    p: f64,
    q: f64,
    out: *mut FraclabBoundReport,
) -> FraclabStatus {
    guard(|| write_out(out, (&bounds::verify_strong_type(grid_ref(grid)?, alpha, p, q)?).into()))
}

/// Separation of `J^α f_n` and `J^α f_m` in the critical space on `[t0, t1]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fraclab_noncompact_gap(
    n: u32,
    m: u32,
    alpha: f64,
    p: f64,
    t0: f64,
    t1: f64,
    out: *mut FraclabGapReport,
) -> FraclabStatus {
    guard(|| {
        let iv = Interval::new(t0, t1)?;
        let r = compactness::noncompact_gap(n, m, alpha, p, iv)?;
        write_out(
            out,
            FraclabGapReport {
                critical_q: r.critical_q,
                bound: r.bound,
                measured: r.measured,
                sequence_norm: r.sequence_norm,
            },
        )
    })
}
