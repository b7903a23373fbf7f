//! C ABI for the nls-fem solver.
//!
//! Solvers are opaque handles created with [`nls_solver_new`] and released
//! with [`nls_solver_free`]. Every fallible call returns an [`NlsStatus`];
//! the message of the last failure on the calling thread is available from
//! [`nls_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nls_fem::fe::{build_uniform_mesh, FeSpace};
use nls_fem::timestep::{advance, NlsProblem, RunOutput, TimeGrid};
use nls_fem::verification::{
    builtin_case, consistency_residuals, convergence_study, error_h1, error_l2, Coupling, StudyOptions,
};
use nls_fem::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NlsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownCase = 3,
    SingularMatrix = 4,
    NonFinite = 5,
    BufferTooSmall = 6,
    NotRun = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NlsCoupling {
    /// k ∝ h
    KPropH = 0,
    /// k ∝ h^{r/2}
    KPropHR2 = 1,
}

/// Parameters of a single run.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct NlsRunParams {
    /// Built-in case name, NUL-terminated: "ms1", "free1" or "zero".
    pub case_name: *const c_char,
    pub degree: u32,
    /// Element count.
    pub m: usize,
    pub time_steps: usize,
    /// Interior time nodes jitter, fraction of the uniform step in [0, 0.5).
    pub time_jitter: f64,
    pub seed: u64,
    /// Non-zero: replace the forcing by zero.
    pub drop_forcing: u8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NlsStepRecord {
    pub n: usize,
    pub t: f64,
    pub l2_norm: f64,
    pub g_l2: f64,
    pub wall_time: f64,
}

/// Opaque solver handle.
pub struct NlsSolver {
    space: FeSpace,
    problem: NlsProblem,
    grid: TimeGrid,
    output: Option<RunOutput>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &Error) -> NlsStatus {
    match err {
        Error::Step { source, .. } | Error::Level { source, .. } => status_of(source),
        Error::UnknownCase(_) => NlsStatus::UnknownCase,
        Error::SingularMatrix { .. } => NlsStatus::SingularMatrix,
        Error::NonFiniteWeight { .. } => NlsStatus::NonFinite,
        Error::InvalidMesh(_)
        | Error::UnsupportedDegree(_)
        | Error::UnsupportedQuadrature(_)
        | Error::DimensionMismatch { .. }
        | Error::InvalidTimeGrid(_)
        | Error::InvalidProblem(_)
        | Error::InvalidArgument(_)
        | Error::MissingDerivative(_) => NlsStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> NlsStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// Runs `body`, mapping panics to [`NlsStatus::Panic`].
fn guard(body: impl FnOnce() -> NlsStatus) -> NlsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            NlsStatus::Panic
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return NlsStatus::NullPointer;
        })+
    };
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, NlsStatus> {
    // SAFETY: caller guarantees a valid NUL-terminated string.
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        NlsStatus::InvalidArgument
    })
}

/// Creates a solver for a built-in case on a uniform mesh.
///
/// # Safety
/// `params` must point to a valid [`NlsRunParams`] whose `case_name` is a
/// NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nls_solver_new(params: *const NlsRunParams, out: *mut *mut NlsSolver) -> NlsStatus {
    non_null!(params, out);
    guard(|| {
        // SAFETY: checked non-null above; validity is the caller's contract.
        let params = unsafe { *params };
        let case_name = params.case_name;
        non_null!(case_name);
        let name = match unsafe { read_str(case_name) } {
            Ok(s) => s,
            Err(s) => return s,
        };
        let build = || -> Result<NlsSolver, Error> {
            let case = builtin_case(name)?;
            let problem = if params.drop_forcing != 0 {
                case.problem.without_forcing()
            } else {
                case.problem
            };
            let (a, b) = problem.domain;
            let space = FeSpace::new(build_uniform_mesh(a, b, params.m)?, params.degree as usize)?;
            let grid = TimeGrid::perturbed(problem.final_time, params.time_steps, params.time_jitter, params.seed)?;
            Ok(NlsSolver {
                space,
                problem,
                grid,
                output: None,
            })
        };
        match build() {
            Ok(solver) => {
                // SAFETY: `out` checked non-null.
                unsafe { *out = Box::into_raw(Box::new(solver)) };
                NlsStatus::Ok
            }
            Err(e) => {
                unsafe { *out = ptr::null_mut() };
                fail(e)
            }
        }
    })
}

/// Releases a solver. Passing null is a no-op.
///
/// # Safety
/// `solver` must come from [`nls_solver_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn nls_solver_free(solver: *mut NlsSolver) {
    if !solver.is_null() {
        // SAFETY: ownership returns to Rust exactly once.
        drop(unsafe { Box::from_raw(solver) });
    }
}

/// Runs the full time march. May be called again; the result is replaced.
///
/// # Safety
/// `solver` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nls_solver_advance(solver: *mut NlsSolver) -> NlsStatus {
    non_null!(solver);
    guard(|| {
        let s = unsafe { &mut *solver };
        match advance(&s.space, &s.problem, &s.grid) {
            Ok(out) => {
                s.output = Some(out);
                NlsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

fn output_of(s: &NlsSolver) -> Result<&RunOutput, NlsStatus> {
    s.output.as_ref().ok_or_else(|| {
        set_error("solver has not been advanced");
        NlsStatus::NotRun
    })
}

/// Number of free complex degrees of freedom.
///
/// # Safety
/// `solver` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nls_solver_n_dof(solver: *const NlsSolver, out: *mut usize) -> NlsStatus {
    non_null!(solver, out);
    unsafe { *out = (*solver).space.n_dof() };
    NlsStatus::Ok
}

/// Number of time steps of the grid.
///
/// # Safety
/// `solver` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nls_solver_step_count(solver: *const NlsSolver, out: *mut usize) -> NlsStatus {
    non_null!(solver, out);
    unsafe { *out = (*solver).grid.steps() };
    NlsStatus::Ok
}

/// Record of step `index` (0-based, i.e. time level `index + 1`).
///
/// # Safety
/// `solver` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nls_solver_step_record(
    solver: *const NlsSolver,
    index: usize,
    out: *mut NlsStepRecord,
) -> NlsStatus {
    non_null!(solver, out);
    let run = match output_of(unsafe { &*solver }) {
        Ok(r) => r,
        Err(s) => return s,
    };
    match run.records.get(index) {
        Some(r) => {
            unsafe {
                *out = NlsStepRecord {
                    n: r.n,
                    t: r.t,
                    l2_norm: r.l2_norm,
                    g_l2: r.g_l2,
                    wall_time: r.wall_time,
                }
            };
            NlsStatus::Ok
        }
        None => {
            set_error(format!("step index {index} out of range"));
            NlsStatus::InvalidArgument
        }
    }
}

/// Copies the final coefficients into `re[0..len]`, `im[0..len]`; `len`
/// must be at least the DOF count.
///
/// # Safety
/// `re` and `im` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn nls_solver_solution(
    solver: *const NlsSolver,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> NlsStatus {
    non_null!(solver, re, im);
    let run = match output_of(unsafe { &*solver }) {
        Ok(r) => r,
        Err(s) => return s,
    };
    let u = &run.final_state;
    if len < u.len() {
        set_error(format!("buffer holds {len} values, need {}", u.len()));
        return NlsStatus::BufferTooSmall;
    }
    // SAFETY: both buffers hold at least u.len() values.
    let (re, im) = unsafe { (std::slice::from_raw_parts_mut(re, u.len()), std::slice::from_raw_parts_mut(im, u.len())) };
    for (i, z) in u.iter().enumerate() {
        re[i] = z.re;
        im[i] = z.im;
    }
    NlsStatus::Ok
}

/// `max_n |‖U^n‖_M − ‖U^0‖_M|`.
///
/// # Safety
/// `solver` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nls_solver_mass_drift(solver: *const NlsSolver, out: *mut f64) -> NlsStatus {
    non_null!(solver, out);
    match output_of(unsafe { &*solver }) {
        Ok(r) => {
            unsafe { *out = r.mass_drift() };
            NlsStatus::Ok
        }
        Err(s) => s,
    }
}

/// Final-time L2 and H1-seminorm errors against the exact solution.
///
/// # Safety
/// `solver` must be a live handle; `err_l2`, `err_h1` writable.
#[no_mangle]
pub unsafe extern "C" fn nls_solver_errors(solver: *const NlsSolver, err_l2: *mut f64, err_h1: *mut f64) -> NlsStatus {
    non_null!(solver, err_l2, err_h1);
    guard(|| {
        let s = unsafe { &*solver };
        let run = match output_of(s) {
            Ok(r) => r,
            Err(st) => return st,
        };
        let Some(exact) = &s.problem.exact else {
            set_error("problem has no exact solution");
            return NlsStatus::InvalidArgument;
        };
        let t = s.grid.final_time();
        let res = error_l2(&s.space, &run.final_state, exact.as_ref(), t)
            .and_then(|a| Ok((a, error_h1(&s.space, &run.final_state, exact.as_ref(), t)?)));
        match res {
            Ok((a, b)) => {
                unsafe {
                    *err_l2 = a;
                    *err_h1 = b;
                }
                NlsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Consistency residual norms for each of the `n` step sizes in `ks`, and
/// the fitted log-log orders (NaN when a residual vanishes).
///
/// # Safety
/// `ks`, `r_half`, `r_full` must hold `n` doubles; the order pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn nls_consistency(
    case_name: *const c_char,
    ks: *const f64,
    n: usize,
    t_base: f64,
    r_half: *mut f64,
    r_full: *mut f64,
    order_half: *mut f64,
    order_full: *mut f64,
) -> NlsStatus {
    non_null!(case_name, ks, r_half, r_full, order_half, order_full);
    guard(|| {
        let name = match unsafe { read_str(case_name) } {
            Ok(s) => s,
            Err(s) => return s,
        };
        let ks = unsafe { std::slice::from_raw_parts(ks, n) };
        match builtin_case(name).and_then(|c| consistency_residuals(&c, ks, t_base)) {
            Ok(rep) => {
                unsafe {
                    std::slice::from_raw_parts_mut(r_half, n).copy_from_slice(&rep.r_half_norms);
                    std::slice::from_raw_parts_mut(r_full, n).copy_from_slice(&rep.r_full_norms);
                    *order_half = rep.fitted_order_half.unwrap_or(f64::NAN);
                    *order_full = rep.fitted_order_full.unwrap_or(f64::NAN);
                }
                NlsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Convergence study for one degree; writes the median L2 and H1 rates.
///
/// # Safety
/// `case_name` must be NUL-terminated; output pointers writable.
#[no_mangle]
pub unsafe extern "C" fn nls_convergence(
    case_name: *const c_char,
    degree: u32,
    levels: usize,
    m0: usize,
    coupling: NlsCoupling,
    time_jitter: f64,
    seed: u64,
    median_l2: *mut f64,
    median_h1: *mut f64,
) -> NlsStatus {
    non_null!(case_name, median_l2, median_h1);
    guard(|| {
        let name = match unsafe { read_str(case_name) } {
            Ok(s) => s,
            Err(s) => return s,
        };
        let opts = StudyOptions {
            degrees: vec![degree as usize],
            levels,
            m0,
            coupling: match coupling {
                NlsCoupling::KPropH => Coupling::KPropH,
                NlsCoupling::KPropHR2 => Coupling::KPropHR2,
            },
            time_jitter,
            seed,
            ..StudyOptions::default()
        };
        match builtin_case(name).and_then(|c| convergence_study(&c, &opts)) {
            Ok(reports) => {
                let r = &reports[0];
                unsafe {
                    *median_l2 = r.median_rate_l2().unwrap_or(f64::NAN);
                    *median_h1 = r.median_rate_h1().unwrap_or(f64::NAN);
                }
                NlsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Copies the last error message of this thread into `buf` (truncated,
/// always NUL-terminated when `len > 0`). Returns the full message length
/// including the terminator.
///
/// # Safety
/// `buf` must be writable for `len` bytes, or null with `len == 0`.
#[no_mangle]
pub unsafe extern "C" fn nls_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            // SAFETY: `buf` holds `len > n` bytes.
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        bytes.len() + 1
    })
}
