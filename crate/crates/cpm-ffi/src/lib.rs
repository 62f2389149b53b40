//! C ABI for the closest point method solvers.
//!
//! Handles are opaque pointers created and freed here; every function
//! returns a [`CpmStatus`] and writes results through out-pointers.  On any
//! failure a thread-local message is available via
//! [`cpm_last_error_message`].  The generated header lives in
//! `include/cpm.h`.

use cpm::band::build_band;
use cpm::linalg::direct_solve;
use cpm::multigrid::{build_hierarchy, MgParams, SmootherMode};
use cpm::operators::{assemble_system, SystemParams};
use cpm::problems::{make_problem, surface_error, Problem};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result code of every FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownProblem = 3,
    GeometryFailure = 4,
    SingularSystem = 5,
    /// The V-cycle budget ran out before the stopping rule fired; the
    /// solution handle still holds the last iterate.
    NotConverged = 6,
    RuntimeError = 7,
}

/// Smoothing strategy of the V-cycle.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpmSmoother {
    /// Jacobi on the shifted Laplacian, each sweep followed by a
    /// closest-point extension.
    RuuthMerriman = 0,
    /// Jacobi on the full system with the modified residual.
    Standard = 1,
}

/// Multigrid controls; get defaults from [`cpm_mg_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CpmMgOptions {
    pub nu1: u32,
    pub nu2: u32,
    /// Relative successive-change stopping threshold.
    pub tol: f64,
    pub max_cycles: u32,
    /// Coarsest grid resolution N (coarsest dx = 1/N).
    pub coarsest_n: u32,
    pub smoother: CpmSmoother,
}

/// An instantiated test problem (opaque).
pub struct CpmProblem {
    inner: Problem,
}

/// A solved system (opaque): band values plus diagnostics.
pub struct CpmSolution {
    values: Vec<f64>,
    dofs: usize,
    cycles: u32,
    converged: bool,
    surface_error: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
}

fn status_of(err: &cpm::Error) -> CpmStatus {
    match err {
        cpm::Error::UnknownProblem(_) => CpmStatus::UnknownProblem,
        cpm::Error::MedialAxis { .. }
        | cpm::Error::NoConvergence { .. }
        | cpm::Error::BandTooNarrow(_)
        | cpm::Error::StencilEscapesBand { .. } => CpmStatus::GeometryFailure,
        cpm::Error::Singular { .. } | cpm::Error::ZeroDiagonal { .. } => CpmStatus::SingularSystem,
        cpm::Error::InvalidConfig(_) | cpm::Error::DimMismatch(_) => CpmStatus::InvalidArgument,
        _ => CpmStatus::RuntimeError,
    }
}

/// Run a closure that may panic; map panics to `RuntimeError`.
fn guarded(body: impl FnOnce() -> CpmStatus) -> CpmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            CpmStatus::RuntimeError
        }
    }
}

/// Message describing the most recent failure on this thread.  The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cpm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Create a named problem: `circle`, `bean`, `sphere_harmonic`, `torus`,
/// `dziuk` or `sphere_varcoef`; `c` is the zeroth-order shift (1.0 is the
/// standard configuration).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cpm_problem_create(
    name: *const c_char,
    c: f64,
    out: *mut *mut CpmProblem,
) -> CpmStatus {
    if name.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CpmStatus::NullPointer;
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        set_error("problem name is not valid UTF-8");
        return CpmStatus::InvalidArgument;
    };
    guarded(|| match make_problem(name, c, None) {
        Ok(problem) => {
            *out = Box::into_raw(Box::new(CpmProblem { inner: problem }));
            CpmStatus::Ok
        }
        Err(err) => {
            set_error(&err.to_string());
            status_of(&err)
        }
    })
}

/// # Safety
/// `problem` must come from [`cpm_problem_create`] and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn cpm_problem_free(problem: *mut CpmProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Paper-standard multigrid controls: ν₁ = ν₂ = 3, tol = 1e-6, 50 cycles,
/// coarsest N = 5, Ruuth–Merriman smoothing.
#[no_mangle]
pub extern "C" fn cpm_mg_options_default() -> CpmMgOptions {
    CpmMgOptions {
        nu1: 3,
        nu2: 3,
        tol: 1e-6,
        max_cycles: 50,
        coarsest_n: 5,
        smoother: CpmSmoother::RuuthMerriman,
    }
}

fn make_solution(
    grid: &cpm::band::BandedGrid,
    u: Vec<f64>,
    cycles: u32,
    converged: bool,
    problem: &Problem,
) -> Result<CpmSolution, cpm::Error> {
    let err = surface_error(grid, &u, problem, problem.default_error_samples())?;
    Ok(CpmSolution { dofs: grid.n(), values: u, cycles, converged, surface_error: err })
}

/// Assemble the embedding system at spacing `dx` and solve it directly.
///
/// # Safety
/// `problem` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cpm_solve_direct(
    problem: *const CpmProblem,
    dx: f64,
    out: *mut *mut CpmSolution,
) -> CpmStatus {
    if problem.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CpmStatus::NullPointer;
    }
    let problem = &(*problem).inner;
    guarded(|| {
        let run = || -> Result<CpmSolution, cpm::Error> {
            let params = SystemParams { c: problem.c, ..SystemParams::default() };
            let grid = build_band(&problem.surface, dx, params.max_degree(), None)?;
            let diffusivity = problem.diffusivity_vector(&grid);
            let a = assemble_system(&grid, &params, diffusivity.as_deref())?;
            let f = problem.rhs_vector(&grid);
            let u = direct_solve(&a, &f)?;
            make_solution(&grid, u, 0, true, problem)
        };
        match run() {
            Ok(solution) => {
                *out = Box::into_raw(Box::new(solution));
                CpmStatus::Ok
            }
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// Solve with the closest-point V-cycle.  `options` may be NULL for the
/// defaults.  Returns `NotConverged` (with the last iterate in `out`) when
/// the cycle budget runs out.
///
/// # Safety
/// `problem` must be a live handle; `out` must be valid; `options`, when
/// non-NULL, must point to a valid struct.
#[no_mangle]
pub unsafe extern "C" fn cpm_solve_multigrid(
    problem: *const CpmProblem,
    dx: f64,
    options: *const CpmMgOptions,
    out: *mut *mut CpmSolution,
) -> CpmStatus {
    if problem.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CpmStatus::NullPointer;
    }
    let problem = &(*problem).inner;
    let options = if options.is_null() { cpm_mg_options_default() } else { *options };
    guarded(|| {
        let run = || -> Result<(CpmSolution, bool), cpm::Error> {
            let params = SystemParams { c: problem.c, ..SystemParams::default() };
            let mg = MgParams {
                nu1: options.nu1 as usize,
                nu2: options.nu2 as usize,
                tol: options.tol,
                max_cycles: options.max_cycles as usize,
                smoother: match options.smoother {
                    CpmSmoother::RuuthMerriman => SmootherMode::RuuthMerriman,
                    CpmSmoother::Standard => SmootherMode::Standard,
                },
            };
            let diffusivity_fn = |r: &cpm::geometry::CpResult| {
                problem.diffusivity(r.cp, r.param).expect("a(cp)")
            };
            let h = build_hierarchy(
                &problem.surface,
                dx,
                options.coarsest_n as usize,
                params,
                mg,
                problem.has_diffusivity().then_some(&diffusivity_fn),
            )?;
            let grid = &h.finest().grid;
            let f = problem.rhs_vector(grid);
            let outcome = h.solve(&f, &vec![0.0; grid.n()], None);
            let u_ext = h.finest().extension.apply(&outcome.u);
            let solution = make_solution(
                grid,
                u_ext,
                outcome.stats.len() as u32,
                outcome.converged,
                problem,
            )?;
            Ok((solution, outcome.converged))
        };
        match run() {
            Ok((solution, converged)) => {
                *out = Box::into_raw(Box::new(solution));
                if converged {
                    CpmStatus::Ok
                } else {
                    set_error("V-cycle budget exhausted before the stopping rule fired");
                    CpmStatus::NotConverged
                }
            }
            Err(err) => {
                set_error(&err.to_string());
                status_of(&err)
            }
        }
    })
}

/// # Safety
/// `solution` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cpm_solution_dofs(
    solution: *const CpmSolution,
    out: *mut usize,
) -> CpmStatus {
    if solution.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CpmStatus::NullPointer;
    }
    *out = (*solution).dofs;
    CpmStatus::Ok
}

/// Number of V-cycles taken (zero for direct solves).
///
/// # Safety
/// `solution` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cpm_solution_cycles(
    solution: *const CpmSolution,
    out: *mut u32,
) -> CpmStatus {
    if solution.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CpmStatus::NullPointer;
    }
    *out = (*solution).cycles;
    CpmStatus::Ok
}

/// # Safety
/// `solution` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cpm_solution_converged(
    solution: *const CpmSolution,
    out: *mut bool,
) -> CpmStatus {
    if solution.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CpmStatus::NullPointer;
    }
    *out = (*solution).converged;
    CpmStatus::Ok
}

/// Relative ∞-norm surface error against the problem's exact solution.
///
/// # Safety
/// `solution` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cpm_solution_surface_error(
    solution: *const CpmSolution,
    out: *mut f64,
) -> CpmStatus {
    if solution.is_null() || out.is_null() {
        set_error("null pointer argument");
        return CpmStatus::NullPointer;
    }
    *out = (*solution).surface_error;
    CpmStatus::Ok
}

/// Copy the band solution values into `buffer`.  Pass a NULL buffer to
/// query the required length through `written`.
///
/// # Safety
/// `solution` must be a live handle; `buffer`, when non-NULL, must hold
/// `len` doubles; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cpm_solution_values(
    solution: *const CpmSolution,
    buffer: *mut f64,
    len: usize,
    written: *mut usize,
) -> CpmStatus {
    if solution.is_null() || written.is_null() {
        set_error("null pointer argument");
        return CpmStatus::NullPointer;
    }
    let values = &(*solution).values;
    *written = values.len();
    if buffer.is_null() {
        return CpmStatus::Ok;
    }
    if len < values.len() {
        set_error("buffer too small for solution values");
        return CpmStatus::InvalidArgument;
    }
    std::ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len());
    CpmStatus::Ok
}

/// # Safety
/// `solution` must come from a solve call and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn cpm_solution_free(solution: *mut CpmSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}
