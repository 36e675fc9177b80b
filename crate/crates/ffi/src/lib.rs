//! C ABI over `conserved-ops`.
//!
//! Objects cross the boundary as opaque handles released with the matching
//! `co_*_free`. Every fallible call returns a [`CoStatus`]; on failure the
//! message is available from [`co_last_error_message`] on the same thread.
//! Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conserved_ops::algebra::{heisenberg_residual, parse_operator};
use conserved_ops::analytic::{
    electric_shifted_solution, electric_solution, ladder_solution, landau_state, AnalyticSolution, LandauFamily, Point,
};
use conserved_ops::config::Geometry;
use conserved_ops::symmetry::{quantization_report, von_klitzing};
use conserved_ops::verify::{run_verify, Suite, VerifyOptions};
use conserved_ops::{Error, SystemConfig};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Parse = 4,
    Algebra = 5,
    Geometry = 6,
    Domain = 7,
    Nyquist = 8,
    Io = 9,
    Panic = 10,
}

impl From<&Error> for CoStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Config(_) | Error::Json(_) => CoStatus::Config,
            Error::Parse { .. } => CoStatus::Parse,
            Error::Algebra(_) => CoStatus::Algebra,
            Error::Geometry(_) => CoStatus::Geometry,
            Error::Domain(_) | Error::AlreadyConverged => CoStatus::Domain,
            Error::Nyquist { .. } => CoStatus::Nyquist,
            Error::Io(_) => CoStatus::Io,
        }
    }
}

/// Opaque configuration handle.
pub struct CoConfig(SystemConfig);

/// Opaque closed-form solution handle.
pub struct CoSolution(AnalyticSolution);

/// Resistance bookkeeping for one `(dx, dt)` pair.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CoQuantization {
    pub n_real: f64,
    pub n: i64,
    pub is_quantized: bool,
    pub voltage: f64,
    pub current: f64,
    pub resistance: f64,
    pub resistance_in_klitzing: f64,
    pub phase_re: f64,
    pub phase_im: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

enum Fail {
    Status(CoStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CoStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CoStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            let status = CoStatus::from(&e);
            set_error(e.to_string());
            status
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            CoStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(CoStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    // SAFETY: the caller guarantees `p` is null or a live handle.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: the caller guarantees a nul-terminated string.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Fail::Status(CoStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and writable per the caller's contract.
    unsafe { out.write(value) };
    Ok(())
}

/// Last error message on this thread, or null. The pointer stays valid until
/// the next `co_*` call on the same thread.
#[no_mangle]
pub extern "C" fn co_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn co_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Natural units with `m = q = E = B = 1`, `L = 10`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn co_config_natural(out: *mut *mut CoConfig) -> CoStatus {
    guard(|| unsafe { put(out, Box::into_raw(Box::new(CoConfig(SystemConfig::natural()))), "out") })
}

/// Parses a JSON configuration document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn co_config_from_json(json: *const c_char, out: *mut *mut CoConfig) -> CoStatus {
    guard(|| {
        let cfg = SystemConfig::from_json_str(unsafe { text(json, "json")? })?;
        unsafe { put(out, Box::into_raw(Box::new(CoConfig(cfg))), "out") }
    })
}

/// Switches the geometry: 0 is the 1D electric field, 1 the parallel fields.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn co_config_set_geometry(cfg: *mut CoConfig, geometry: u32) -> CoStatus {
    guard(|| {
        let cfg = unsafe { cfg.as_mut() }.ok_or_else(|| null("cfg"))?;
        cfg.0.fields.geometry = match geometry {
            0 => Geometry::Electric1d,
            1 => Geometry::ParallelEb,
            g => return Err(Fail::Status(CoStatus::InvalidArgument, format!("unknown geometry {g}"))),
        };
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn co_config_free(cfg: *mut CoConfig) {
    if !cfg.is_null() {
        // SAFETY: allocated by `Box::into_raw` in a constructor above.
        drop(unsafe { Box::from_raw(cfg) });
    }
}

/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn co_cyclotron_frequency(cfg: *const CoConfig, out: *mut f64) -> CoStatus {
    guard(|| {
        let cfg = unsafe { borrow(cfg, "cfg")? };
        let wc = cfg.0.cyclotron_frequency()?;
        unsafe { put(out, wc, "out") }
    })
}

/// The resistance quantum `h/q^2` in the configured units.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn co_von_klitzing(cfg: *const CoConfig, out: *mut f64) -> CoStatus {
    guard(|| {
        let cfg = unsafe { borrow(cfg, "cfg")? };
        unsafe { put(out, von_klitzing(&cfg.0), "out") }
    })
}

fn new_solution(out: *mut *mut CoSolution, s: AnalyticSolution) -> Result<(), Fail> {
    unsafe { put(out, Box::into_raw(Box::new(CoSolution(s))), "out") }
}

/// The fundamental 1D solution.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn co_solution_electric(cfg: *const CoConfig, out: *mut *mut CoSolution) -> CoStatus {
    guard(|| {
        let cfg = unsafe { borrow(cfg, "cfg")? };
        new_solution(out, electric_solution(&cfg.0))
    })
}

/// The 1D solution shifted in time by `dt`.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn co_solution_electric_shifted(
    cfg: *const CoConfig,
    dt: f64,
    out: *mut *mut CoSolution,
) -> CoStatus {
    guard(|| {
        let cfg = unsafe { borrow(cfg, "cfg")? };
        new_solution(out, electric_shifted_solution(dt, &cfg.0))
    })
}

/// `P_j phi` from the degeneracy ladder.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn co_solution_ladder(cfg: *const CoConfig, j: u32, out: *mut *mut CoSolution) -> CoStatus {
    guard(|| {
        let cfg = unsafe { borrow(cfg, "cfg")? };
        new_solution(out, ladder_solution(j as usize, &cfg.0)?)
    })
}

/// Transverse Landau state. `family` is 0 for the y-family, 1 for the
/// z-family; `shift` is its centre.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn co_solution_landau(
    cfg: *const CoConfig,
    family: u32,
    n: u32,
    shift: f64,
    out: *mut *mut CoSolution,
) -> CoStatus {
    guard(|| {
        let cfg = unsafe { borrow(cfg, "cfg")? };
        let family = match family {
            0 => LandauFamily::Y,
            1 => LandauFamily::Z,
            f => return Err(Fail::Status(CoStatus::InvalidArgument, format!("unknown family {f}"))),
        };
        new_solution(out, landau_state(family, n as usize, shift, &cfg.0)?)
    })
}

/// Evaluates a solution at one point.
///
/// # Safety
/// `sol` must be a live handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn co_solution_eval(
    sol: *const CoSolution,
    x: f64,
    y: f64,
    z: f64,
    t: f64,
    re: *mut f64,
    im: *mut f64,
) -> CoStatus {
    guard(|| {
        let sol = unsafe { borrow(sol, "sol")? };
        let v = sol.0.evaluate(&Point { x, y, z, t });
        unsafe {
            put(re, v.re, "re")?;
            put(im, v.im, "im")
        }
    })
}

/// # Safety
/// `sol` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn co_solution_free(sol: *mut CoSolution) {
    if !sol.is_null() {
        // SAFETY: allocated by `Box::into_raw` in `new_solution`.
        drop(unsafe { Box::from_raw(sol) });
    }
}

/// Quantization bookkeeping for displacements `(dx, dt)`.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn co_quantization_report(
    cfg: *const CoConfig,
    dx: f64,
    dt: f64,
    tol: f64,
    out: *mut CoQuantization,
) -> CoStatus {
    guard(|| {
        let cfg = unsafe { borrow(cfg, "cfg")? };
        let r = quantization_report(dx, dt, &cfg.0, tol)?;
        let q = CoQuantization {
            n_real: r.n_real,
            n: r.n,
            is_quantized: r.is_quantized,
            voltage: r.voltage,
            current: r.current,
            resistance: r.resistance,
            resistance_in_klitzing: r.resistance_in_klitzing,
            phase_re: r.phase_re,
            phase_im: r.phase_im,
        };
        unsafe { put(out, q, "out") }
    })
}

/// Heisenberg residual of operator `f` under Hamiltonian `h`, both in the
/// operator text grammar. Writes whether it vanishes and, if `text_out` is
/// non-null, its canonical text (release with [`co_string_free`]).
///
/// # Safety
/// `f` and `h` must be nul-terminated; `is_zero` writable; `text_out` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn co_heisenberg_residual(
    f: *const c_char,
    h: *const c_char,
    is_zero: *mut bool,
    text_out: *mut *mut c_char,
) -> CoStatus {
    guard(|| {
        let f = parse_operator(unsafe { text(f, "f")? })?;
        let h = parse_operator(unsafe { text(h, "h")? })?;
        let r = heisenberg_residual(&f, &h)?;
        unsafe { put(is_zero, r.is_zero(), "is_zero")? };
        if !text_out.is_null() {
            let s = CString::new(r.to_string()).expect("operator text has no nul");
            unsafe { put(text_out, s.into_raw(), "text_out")? };
        }
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn co_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Runs verification suites. `suites` is a comma-separated list or null for
/// all of them.
///
/// # Safety
/// `cfg` must be a live handle, `suites` null or nul-terminated, and the two
/// counters writable.
#[no_mangle]
pub unsafe extern "C" fn co_verify(
    cfg: *const CoConfig,
    suites: *const c_char,
    total: *mut u32,
    failures: *mut u32,
) -> CoStatus {
    guard(|| {
        let cfg = unsafe { borrow(cfg, "cfg")? };
        let suites = if suites.is_null() {
            Vec::new()
        } else {
            unsafe { text(suites, "suites")? }
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(str::parse::<Suite>)
                .collect::<Result<Vec<_>, _>>()?
        };
        let report = run_verify(
            &cfg.0,
            &VerifyOptions {
                suites,
                operators: Vec::new(),
            },
        );
        unsafe {
            put(total, report.rows.len() as u32, "total")?;
            put(failures, report.failures() as u32, "failures")
        }
    })
}
