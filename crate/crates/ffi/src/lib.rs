//! C ABI over `fracchain`.
//!
//! Conventions:
//! - every fallible call returns an [`FcStatus`]; on failure a message is
//!   available from [`fc_last_error_message`] on the same thread;
//! - objects are opaque handles returned through out-pointers (for example
//!   by `fc_params_example` or `fc_simulate`) and released with the matching
//!   `fc_*_free`; passing NULL to a free function is a no-op;
//! - results are written through out-pointers, which are left untouched on
//!   failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use fracchain::equilibria::find_equilibria;
use fracchain::scan::{simulate, SimulationSpec};
use fracchain::stability::{boundedness_check, classify_interior, global_stability_check};
use fracchain::{nondimensionalize, DimParams, Equilibrium, EquilibriumKind, Error, MemoryPolicy, State, Trajectory};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    NullPointer = 1,
    /// Bad argument, parameter file or configuration.
    InvalidArgument = 2,
    /// The integration blew up.
    Diverged = 3,
    /// A series or fit failed numerically.
    Numerical = 4,
    /// The parameters admit no feasible interior equilibrium.
    NoInterior = 5,
    Io = 6,
    /// A Rust panic was caught at the boundary.
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcVerdict {
    Stable = 0,
    Unstable = 1,
    NonHyperbolic = 2,
    Inconclusive = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcEquilibriumKind {
    Trivial = 0,
    Axial = 1,
    Planar = 2,
    Interior = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FcState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<State> for FcState {
    fn from(s: State) -> Self {
        FcState { x: s.x, y: s.y, z: s.z }
    }
}

impl From<FcState> for State {
    fn from(s: FcState) -> Self {
        State::new(s.x, s.y, s.z)
    }
}

/// One equilibrium. `dim` is meaningful only when `has_dim` is true.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FcEquilibrium {
    pub kind: FcEquilibriumKind,
    pub nondim: FcState,
    pub dim: FcState,
    pub has_dim: bool,
    pub existence_ok: bool,
}

/// Local stability of the interior equilibrium at one order.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FcStability {
    pub verdict: FcVerdict,
    pub eig_re: [f64; 3],
    pub eig_im: [f64; 3],
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub discriminant: f64,
    /// Coefficient case 1..=4, or 0 when none applies.
    pub coefficient_case: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FcGlobal {
    pub cond1: f64,
    pub cond2: f64,
    pub cond3: f64,
    pub alpha: f64,
    pub all_satisfied: bool,
    /// Interior equilibrium the conditions were evaluated at (nondimensional).
    pub equilibrium: FcState,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FcBounds {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub alpha: f64,
    pub beta: f64,
}

/// Opaque parameter set (dimensional).
pub struct FcParams(DimParams);

/// Opaque simulation result.
pub struct FcTrajectory {
    traj: Trajectory,
    negativity: usize,
}

/// Opaque list of equilibria.
pub struct FcEquilibria(Vec<Equilibrium>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> FcStatus {
    match err {
        Error::Domain { .. } | Error::Config { .. } | Error::Parse { .. } => FcStatus::InvalidArgument,
        Error::Divergence { .. } => FcStatus::Diverged,
        Error::Convergence { .. } | Error::DegenerateFit(_) => FcStatus::Numerical,
        Error::NoInteriorEquilibrium => FcStatus::NoInterior,
        Error::Io { .. } => FcStatus::Io,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (FcStatus, String)>) -> FcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            FcStatus::Internal
        }
    }
}

fn lib<T>(r: fracchain::Result<T>) -> Result<T, (FcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (FcStatus, String) {
    (FcStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (FcStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn string<'a>(s: *const c_char, what: &str) -> Result<&'a str, (FcStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (FcStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

/// Boxes `v` into a handle; checks `out` first so nothing leaks.
unsafe fn put_handle<T>(out: *mut *mut T, v: T) -> Result<(), (FcStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(v)));
    Ok(())
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), (FcStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static, NUL-terminated library version.
#[no_mangle]
pub extern "C" fn fc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---- parameters ----

/// Built-in parameter set `n` in 1..=5.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn fc_params_example(n: u32, out: *mut *mut FcParams) -> FcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = DimParams::example(n).ok_or((FcStatus::InvalidArgument, format!("no example {n}; use 1..=5")))?;
        put_handle(out, FcParams(p))
    })
}

/// Reads a `name = value` parameter file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_params_from_file(path: *const c_char, out: *mut *mut FcParams) -> FcStatus {
    guard(|| {
        let path = string(path, "path")?;
        let p = lib(DimParams::from_file(Path::new(path)))?;
        put_handle(out, FcParams(p))
    })
}

/// Parses parameter-file text held in memory.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_params_parse(text: *const c_char, out: *mut *mut FcParams) -> FcStatus {
    guard(|| {
        let text = string(text, "text")?;
        let p = lib(DimParams::parse(text, Path::new("<memory>")))?;
        put_handle(out, FcParams(p))
    })
}

/// # Safety
/// `params` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fc_params_free(params: *mut FcParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Reads one parameter by name (`a0`, `b0`, `v0` … `c3`).
///
/// # Safety
/// Pointers must be valid; `name` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn fc_params_get(params: *const FcParams, name: *const c_char, out: *mut f64) -> FcStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let name = string(name, "name")?;
        let v =
            p.0.get(name)
                .ok_or((FcStatus::InvalidArgument, format!("unknown parameter `{name}`")))?;
        put(out, v, "out")
    })
}

/// Sets one parameter by name; the value must keep the set valid.
///
/// # Safety
/// Pointers must be valid; `name` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn fc_params_set(params: *mut FcParams, name: *const c_char, value: f64) -> FcStatus {
    guard(|| {
        let p = params.as_mut().ok_or_else(|| null("params"))?;
        let name = string(name, "name")?;
        let updated = lib(p.0.with(name, value))?;
        lib(updated.validate())?;
        p.0 = updated;
        Ok(())
    })
}

// ---- simulation ----

/// Integrates the dimensional system from `init` over `[0, t_final]`.
/// `window_length <= 0` selects full memory.
///
/// # Safety
/// `params` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_simulate(
    params: *const FcParams,
    order: f64,
    init: FcState,
    t_final: f64,
    step: f64,
    window_length: f64,
    out: *mut *mut FcTrajectory,
) -> FcStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let memory = if window_length > 0.0 {
            MemoryPolicy::Truncated { window_length }
        } else {
            MemoryPolicy::Full
        };
        let spec = SimulationSpec {
            initial_state: init.into(),
            t_final,
            step,
            memory,
            ..SimulationSpec::new(p.0, order)
        };
        let run = lib(simulate(&spec))?;
        let handle = FcTrajectory {
            negativity: run.monitor.negativity.len(),
            traj: run.trajectory,
        };
        put_handle(out, handle)
    })
}

/// Number of grid points (including `t = 0`); 0 for NULL.
///
/// # Safety
/// `traj` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fc_trajectory_len(traj: *const FcTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.traj.len())
}

/// Borrowed pointer to `len` grid times, valid while the handle lives.
///
/// # Safety
/// `traj` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fc_trajectory_times(traj: *const FcTrajectory) -> *const f64 {
    traj.as_ref().map_or(ptr::null(), |t| t.traj.times.as_ptr())
}

/// Borrowed pointer to `3 * len` values, row-major `(x, y, z)` per grid point.
///
/// # Safety
/// `traj` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fc_trajectory_states(traj: *const FcTrajectory) -> *const f64 {
    traj.as_ref().map_or(ptr::null(), |t| t.traj.states_flat().as_ptr())
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fc_trajectory_final_state(traj: *const FcTrajectory, out: *mut FcState) -> FcStatus {
    guard(|| {
        let t = deref(traj, "traj")?;
        put(out, State::from_slice(t.traj.last_state()).into(), "out")
    })
}

/// Grid points with a component below the non-negativity tolerance.
///
/// # Safety
/// `traj` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fc_trajectory_negativity_count(traj: *const FcTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.negativity)
}

/// # Safety
/// `traj` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fc_trajectory_free(traj: *mut FcTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

// ---- equilibria and stability ----

/// All feasible equilibria, interior points last.
///
/// # Safety
/// `params` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_equilibria(params: *const FcParams, out: *mut *mut FcEquilibria) -> FcStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let eqs = find_equilibria(&nondimensionalize(&p.0), Some(&p.0));
        put_handle(out, FcEquilibria(eqs))
    })
}

/// # Safety
/// `eqs` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fc_equilibria_len(eqs: *const FcEquilibria) -> usize {
    eqs.as_ref().map_or(0, |e| e.0.len())
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fc_equilibria_get(
    eqs: *const FcEquilibria,
    index: usize,
    out: *mut FcEquilibrium,
) -> FcStatus {
    guard(|| {
        let list = &deref(eqs, "eqs")?.0;
        let e = list.get(index).ok_or((
            FcStatus::InvalidArgument,
            format!("index {index} out of range ({} equilibria)", list.len()),
        ))?;
        let kind = match e.kind {
            EquilibriumKind::Trivial => FcEquilibriumKind::Trivial,
            EquilibriumKind::Axial => FcEquilibriumKind::Axial,
            EquilibriumKind::Planar => FcEquilibriumKind::Planar,
            EquilibriumKind::Interior => FcEquilibriumKind::Interior,
        };
        let v = FcEquilibrium {
            kind,
            nondim: e.coords_nondim.into(),
            dim: e.coords_dim.unwrap_or_default().into(),
            has_dim: e.coords_dim.is_some(),
            existence_ok: e.existence_ok,
        };
        put(out, v, "out")
    })
}

/// # Safety
/// `eqs` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fc_equilibria_free(eqs: *mut FcEquilibria) {
    if !eqs.is_null() {
        drop(Box::from_raw(eqs));
    }
}

/// Classifies the first feasible interior equilibrium at order `order`.
///
/// # Safety
/// `params` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_classify_interior(params: *const FcParams, order: f64, out: *mut FcStability) -> FcStatus {
    guard(|| {
        let p = deref(params, "params")?;
        if !(order > 0.0 && order <= 1.0) {
            return Err((
                FcStatus::InvalidArgument,
                format!("order must be in (0, 1], got {order}"),
            ));
        }
        let q = nondimensionalize(&p.0);
        let e = fracchain::interior_equilibrium(&q, Some(&p.0))
            .ok_or((FcStatus::NoInterior, Error::NoInteriorEquilibrium.to_string()))?;
        let r = lib(classify_interior(&q, &e, order))?;
        let co = r.coefficients.unwrap_or(fracchain::stability::CharCoeffs {
            a1: f64::NAN,
            a2: f64::NAN,
            a3: f64::NAN,
        });
        let case = match r.case.map(|c| c.label()) {
            Some("i") => 1,
            Some("ii") => 2,
            Some("iii") => 3,
            Some("iv") => 4,
            _ => 0,
        };
        let v = FcStability {
            verdict: match r.verdict {
                fracchain::Verdict::Stable => FcVerdict::Stable,
                fracchain::Verdict::Unstable => FcVerdict::Unstable,
                fracchain::Verdict::NonHyperbolic => FcVerdict::NonHyperbolic,
                fracchain::Verdict::Inconclusive => FcVerdict::Inconclusive,
            },
            eig_re: r.eigenvalues.map(|z| z.re),
            eig_im: r.eigenvalues.map(|z| z.im),
            a1: co.a1,
            a2: co.a2,
            a3: co.a3,
            discriminant: r.discriminant.unwrap_or(f64::NAN),
            coefficient_case: case,
        };
        put(out, v, "out")
    })
}

/// Global-stability conditions at the interior equilibrium.
///
/// # Safety
/// `params` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_global_check(params: *const FcParams, out: *mut FcGlobal) -> FcStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let g = lib(global_stability_check(&p.0))?;
        let v = FcGlobal {
            cond1: g.cond1,
            cond2: g.cond2,
            cond3: g.cond3,
            alpha: g.alpha,
            all_satisfied: g.all_satisfied,
            equilibrium: g.equilibrium.into(),
        };
        put(out, v, "out")
    })
}

/// Boundedness (absorbing-region) hypothesis check.
///
/// # Safety
/// `params` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_bounds_check(params: *const FcParams, out: *mut FcBounds) -> FcStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let b = boundedness_check(&p.0);
        let v = FcBounds {
            lhs: b.lhs,
            rhs: b.rhs,
            satisfied: b.satisfied,
            alpha: b.alpha,
            beta: b.beta,
        };
        put(out, v, "out")
    })
}

// ---- special functions ----

/// One-parameter Mittag-Leffler function `E_m(z)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_mittag_leffler(m: f64, z: f64, out: *mut f64) -> FcStatus {
    guard(|| put(out, lib(fracchain::specfun::mittag_leffler(m, z))?, "out"))
}

/// Gamma function for `x > 0`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_gamma(x: f64, out: *mut f64) -> FcStatus {
    guard(|| put(out, lib(fracchain::specfun::gamma(x))?, "out"))
}
