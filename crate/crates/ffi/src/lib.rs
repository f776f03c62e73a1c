//! C interface to the aweno solver.
//!
//! Every function returns an [`AwenoStatus`]; on failure a message can be
//! fetched with [`aweno_last_error`]. Solvers are opaque handles created by
//! [`aweno_solver_new`] and released with [`aweno_solver_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use aweno::eos::{GasModel, PrimitiveState};
use aweno::error::Error;
use aweno::lcd::LcdBackend;
use aweno::problems::{exact_riemann, ProblemSpec};
use aweno::solver::{SchemeConfig, Solver, TimeControl};
use aweno::weno::{weno_interpolate, WenoOrder};

pub const AWENO_BACKEND_CH_RI: u32 = 0;
pub const AWENO_BACKEND_CH_CON: u32 = 1;
pub const AWENO_BACKEND_CP_CON: u32 = 2;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AwenoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericalFailure = 3,
    UnknownProblem = 4,
    Io = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Counters of a solver run.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AwenoStats {
    pub steps: u64,
    pub stages: u64,
    pub min_density: f64,
    pub min_pressure: f64,
    pub interp_limiter_activations: u64,
    pub flux_limiter_activations: u64,
    pub retries: u64,
    pub left_mults: u64,
    pub left_calls: u64,
    pub right_mults: u64,
    pub wall_seconds: f64,
    pub conservation_drift: f64,
}

enum Inner {
    One(Solver<3>),
    Two(Solver<4>),
}

/// Opaque solver handle.
pub struct AwenoSolver {
    inner: Inner,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> AwenoStatus {
    match e {
        Error::UnknownProblem(_) => AwenoStatus::UnknownProblem,
        Error::Io { .. } => AwenoStatus::Io,
        e if e.is_numerical() => AwenoStatus::NumericalFailure,
        _ => AwenoStatus::InvalidArgument,
    }
}

fn fail(status: AwenoStatus, msg: impl Into<String>) -> AwenoStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), AwenoStatus>) -> AwenoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AwenoStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(AwenoStatus::Panic, "panic inside aweno"),
    }
}

fn lift<T>(r: aweno::error::Result<T>) -> Result<T, AwenoStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn backend_of(code: u32) -> Result<LcdBackend, AwenoStatus> {
    match code {
        AWENO_BACKEND_CH_RI => Ok(LcdBackend::ChRi),
        AWENO_BACKEND_CH_CON => Ok(LcdBackend::ChCon),
        AWENO_BACKEND_CP_CON => Ok(LcdBackend::CpCon),
        _ => Err(fail(AwenoStatus::InvalidArgument, format!("unknown backend code {code}"))),
    }
}

fn order_of(k: u32) -> Result<WenoOrder, AwenoStatus> {
    lift(WenoOrder::from_k(k))
}

unsafe fn solver_ref<'a>(s: *const AwenoSolver) -> Result<&'a AwenoSolver, AwenoStatus> {
    s.as_ref().ok_or_else(|| fail(AwenoStatus::NullPointer, "null solver handle"))
}

unsafe fn solver_mut<'a>(s: *mut AwenoSolver) -> Result<&'a mut AwenoSolver, AwenoStatus> {
    s.as_mut().ok_or_else(|| fail(AwenoStatus::NullPointer, "null solver handle"))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), AwenoStatus> {
    if p.is_null() {
        Err(fail(AwenoStatus::NullPointer, format!("null {what}")))
    } else {
        Ok(())
    }
}

/// Copies the last error message of this thread into `buf` (NUL terminated,
/// truncated to `cap`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be NULL or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn aweno_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Creates a solver for catalog problem `problem` with order `k` and
/// backend code `backend`. `nx`/`ny` of 0 select the problem defaults and
/// `cfl <= 0` the default CFL number.
///
/// # Safety
/// `problem` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aweno_solver_new(
    problem: *const c_char,
    k: u32,
    backend: u32,
    nx: usize,
    ny: usize,
    cfl: f64,
    out: *mut *mut AwenoSolver,
) -> AwenoStatus {
    guard(|| {
        non_null(problem, "problem name")?;
        non_null(out, "output pointer")?;
        *out = std::ptr::null_mut();
        let name = CStr::from_ptr(problem)
            .to_str()
            .map_err(|_| fail(AwenoStatus::InvalidArgument, "problem name is not UTF-8"))?;
        let spec = lift(ProblemSpec::by_name(name))?;
        let scheme = SchemeConfig::new(order_of(k)?, backend_of(backend)?);
        let nx = if nx == 0 { spec.cells.0 } else { nx };
        let ny = if !spec.is_2d() {
            1
        } else if ny == 0 {
            spec.cells.1
        } else {
            ny
        };
        let cfl = if cfl > 0.0 { cfl } else { spec.default_cfl() };
        let time = TimeControl::new(cfl, spec.t_end);
        let inner = if spec.is_2d() {
            Inner::Two(lift(spec.solver::<4>(scheme, nx, ny, time))?)
        } else {
            Inner::One(lift(spec.solver::<3>(scheme, nx, ny, time))?)
        };
        *out = Box::into_raw(Box::new(AwenoSolver { inner }));
        Ok(())
    })
}

/// Releases a solver. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a handle from [`aweno_solver_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aweno_solver_free(s: *mut AwenoSolver) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// One time step, clipped to the problem end time. The step size is written
/// to `dt` when it is not NULL.
///
/// # Safety
/// `s` must be a live handle; `dt` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn aweno_solver_step(s: *mut AwenoSolver, dt: *mut f64) -> AwenoStatus {
    guard(|| {
        let s = solver_mut(s)?;
        let step = match &mut s.inner {
            Inner::One(x) => lift(x.step())?,
            Inner::Two(x) => lift(x.step())?,
        };
        if !dt.is_null() {
            *dt = step;
        }
        Ok(())
    })
}

/// Advances to `t_end`; a negative value means the problem end time.
///
/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn aweno_solver_advance(s: *mut AwenoSolver, t_end: f64) -> AwenoStatus {
    guard(|| {
        let s = solver_mut(s)?;
        match &mut s.inner {
            Inner::One(x) => {
                let t = if t_end < 0.0 { x.config().time.t_end } else { t_end };
                lift(x.advance_to(t))
            }
            Inner::Two(x) => {
                let t = if t_end < 0.0 { x.config().time.t_end } else { t_end };
                lift(x.advance_to(t))
            }
        }
    })
}

/// Current time.
///
/// # Safety
/// `s` must be a live handle; `t` writable.
#[no_mangle]
pub unsafe extern "C" fn aweno_solver_time(s: *const AwenoSolver, t: *mut f64) -> AwenoStatus {
    guard(|| {
        let s = solver_ref(s)?;
        non_null(t, "time pointer")?;
        *t = match &s.inner {
            Inner::One(x) => x.time(),
            Inner::Two(x) => x.time(),
        };
        Ok(())
    })
}

/// Grid size and number of primitive variables per cell (3 in 1D, 4 in 2D).
///
/// # Safety
/// `s` must be a live handle; the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn aweno_solver_dims(
    s: *const AwenoSolver,
    nx: *mut usize,
    ny: *mut usize,
    nvars: *mut usize,
) -> AwenoStatus {
    guard(|| {
        let s = solver_ref(s)?;
        non_null(nx, "nx pointer")?;
        non_null(ny, "ny pointer")?;
        non_null(nvars, "nvars pointer")?;
        let (g, m) = match &s.inner {
            Inner::One(x) => (*x.grid(), 3),
            Inner::Two(x) => (*x.grid(), 4),
        };
        *nx = g.nx;
        *ny = g.ny;
        *nvars = m;
        Ok(())
    })
}

/// Writes primitive states `(rho, u, [v,] p)` per cell, x fastest, into
/// `buf` of length `len` (in doubles).
///
/// # Safety
/// `s` must be a live handle; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn aweno_solver_copy_primitives(s: *const AwenoSolver, buf: *mut f64, len: usize) -> AwenoStatus {
    guard(|| {
        let s = solver_ref(s)?;
        non_null(buf, "buffer")?;
        let (states, m) = match &s.inner {
            Inner::One(x) => (lift(x.primitives())?, 3),
            Inner::Two(x) => (lift(x.primitives())?, 4),
        };
        let need = states.len() * m;
        if len < need {
            return Err(fail(
                AwenoStatus::BufferTooSmall,
                format!("buffer holds {len} doubles, {need} needed"),
            ));
        }
        let out = std::slice::from_raw_parts_mut(buf, need);
        for (chunk, w) in out.chunks_exact_mut(m).zip(&states) {
            if m == 3 {
                chunk.copy_from_slice(&[w.rho, w.u, w.p]);
            } else {
                chunk.copy_from_slice(&[w.rho, w.u, w.v, w.p]);
            }
        }
        Ok(())
    })
}

/// Run counters.
///
/// # Safety
/// `s` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn aweno_solver_stats(s: *const AwenoSolver, out: *mut AwenoStats) -> AwenoStatus {
    guard(|| {
        let s = solver_ref(s)?;
        non_null(out, "stats pointer")?;
        let (st, drift) = match &s.inner {
            Inner::One(x) => (x.stats(), x.conservation_drift()),
            Inner::Two(x) => (x.stats(), x.conservation_drift()),
        };
        *out = AwenoStats {
            steps: st.steps,
            stages: st.stages,
            min_density: st.min_density,
            min_pressure: st.min_pressure,
            interp_limiter_activations: st.interp_limiter_activations,
            flux_limiter_activations: st.flux_limiter_activations,
            retries: st.retries,
            left_mults: st.mults.left,
            left_calls: st.left_calls,
            right_mults: st.mults.right,
            wall_seconds: st.wall_seconds,
            conservation_drift: drift,
        };
        Ok(())
    })
}

/// WENO interpolation at the right face of the centre of a `2r - 1` point
/// window, `r = (k + 1) / 2`.
///
/// # Safety
/// `window` must hold `len` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn aweno_weno_interpolate(
    window: *const f64,
    len: usize,
    k: u32,
    eps: f64,
    out: *mut f64,
) -> AwenoStatus {
    guard(|| {
        non_null(window, "window")?;
        non_null(out, "output pointer")?;
        let order = order_of(k)?;
        if len != order.window_len() {
            return Err(fail(
                AwenoStatus::InvalidArgument,
                format!("order {k} needs {} points, got {len}", order.window_len()),
            ));
        }
        if !(eps > 0.0) {
            return Err(fail(AwenoStatus::InvalidArgument, "epsilon must be positive"));
        }
        *out = weno_interpolate(std::slice::from_raw_parts(window, len), order, eps);
        Ok(())
    })
}

/// Exact 1D Riemann solution sampled at `xi = x / t`. States are
/// `(rho, u, p)`. `vacuum` (optional) reports whether a vacuum forms.
///
/// # Safety
/// `left`, `right` must hold 3 doubles, `out` 3 writable doubles; `vacuum`
/// NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn aweno_exact_riemann(
    left: *const f64,
    right: *const f64,
    gamma: f64,
    xi: f64,
    out: *mut f64,
    vacuum: *mut bool,
) -> AwenoStatus {
    guard(|| {
        non_null(left, "left state")?;
        non_null(right, "right state")?;
        non_null(out, "output pointer")?;
        let l = std::slice::from_raw_parts(left, 3);
        let r = std::slice::from_raw_parts(right, 3);
        let gas = lift(GasModel::new(gamma))?;
        let (w, vac) = lift(exact_riemann(
            &PrimitiveState::new_1d(l[0], l[1], l[2]),
            &PrimitiveState::new_1d(r[0], r[1], r[2]),
            &gas,
            xi,
        ))?;
        std::slice::from_raw_parts_mut(out, 3).copy_from_slice(&[w.rho, w.u, w.p]);
        if !vacuum.is_null() {
            *vacuum = vac;
        }
        Ok(())
    })
}
