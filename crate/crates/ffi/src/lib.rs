//! C ABI over `contact-index`.
//!
//! Every fallible call returns a [`CiStatus`]; on failure the message is
//! available from [`ci_last_error`] on the same thread. Symbols are opaque
//! handles released with [`ci_symbol_free`]; strings handed out by the library
//! are released with [`ci_string_free`].

use contact_index::cli::{self, RunConfig};
use contact_index::moyal::paired::PairedSymbol;
use contact_index::moyal::parse::{closure_order, parse_closure, parse_symbol};
use contact_index::rtrace;
use contact_index::symcore::scalar::{crat_to_c64, C64};
use contact_index::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CiStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Config = 4,
    NotInAlgebraA = 5,
    NotElliptic = 6,
    /// Quadrature, remainder fit, Fock truncation or expansion depth.
    Numeric = 7,
    MissingClosure = 8,
    NonzeroResidue = 9,
    /// Stencil, chart overlap, sp(2n) or unitarity failures.
    Geometry = 10,
    Unsupported = 11,
    Panic = 12,
}

/// Which trace route `ci_symbol_tau` evaluates.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CiRoute {
    HeatClosedForm = 0,
    Numeric = 1,
    Fock = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CiComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for CiComplex {
    fn from(z: C64) -> Self {
        CiComplex { re: z.re, im: z.im }
    }
}

/// Opaque paired symbol.
pub struct CiSymbol(PairedSymbol);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CiStatus {
    match e {
        Error::Parse(_) => CiStatus::Parse,
        Error::Config(_) => CiStatus::Config,
        Error::NotInAlgebraA(_) => CiStatus::NotInAlgebraA,
        Error::NotElliptic(_) => CiStatus::NotElliptic,
        Error::QuadratureNotConverged(_)
        | Error::NonConvergentRemainder(_)
        | Error::FockTruncationTooSmall(_)
        | Error::DepthTooShallow { .. } => CiStatus::Numeric,
        Error::MissingClosure => CiStatus::MissingClosure,
        Error::NonzeroResidue(_) => CiStatus::NonzeroResidue,
        Error::BoundaryStencil
        | Error::ChartOverlapMismatch(_)
        | Error::NotSymplecticLieAlgebra(_)
        | Error::NotUnitary(_) => CiStatus::Geometry,
        Error::Unsupported(_) => CiStatus::Unsupported,
    }
}

enum Fail {
    Status(CiStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, records any failure and converts it to a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CiStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&msg);
            CiStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(CiStatus::NullArgument, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail::Status(CiStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn read_sym<'a>(p: *const CiSymbol, what: &str) -> Result<&'a PairedSymbol, Fail> {
    p.as_ref().map(|s| &s.0).ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = v;
    Ok(())
}

fn boxed(s: PairedSymbol) -> *mut CiSymbol {
    Box::into_raw(Box::new(CiSymbol(s)))
}

/// Message of the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ci_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ci_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses a symbol literal in `n` variables, expanded to `depth` terms.
/// A null `grade` selects the order of the literal.
///
/// # Safety
/// `text` must be a NUL-terminated string, `grade` null or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ci_symbol_parse(
    text: *const c_char,
    n: usize,
    depth: usize,
    grade: *const i32,
    out: *mut *mut CiSymbol,
) -> CiStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let order = closure_order(&parse_closure(text, n)?)?;
        let plus = parse_symbol(text, n, depth)?;
        let g = grade.as_ref().copied().unwrap_or(order);
        write_out(out, boxed(PairedSymbol::with_grade(plus, g)?))
    })
}

/// Releases a symbol; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ci_symbol_free(s: *mut CiSymbol) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Product a·b in the paired algebra.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ci_symbol_mul(a: *const CiSymbol, b: *const CiSymbol, out: *mut *mut CiSymbol) -> CiStatus {
    guard(|| {
        let (a, b) = (read_sym(a, "a")?, read_sym(b, "b")?);
        if out.is_null() {
            return Err(null("out"));
        }
        write_out(out, boxed(a.mul(b)))
    })
}

/// Sum a + b; both must carry the same grade parity.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ci_symbol_add(a: *const CiSymbol, b: *const CiSymbol, out: *mut *mut CiSymbol) -> CiStatus {
    guard(|| {
        let (a, b) = (read_sym(a, "a")?, read_sym(b, "b")?);
        if out.is_null() {
            return Err(null("out"));
        }
        write_out(out, boxed(a.add(b)?))
    })
}

/// Number of phase-space variable pairs n.
///
/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ci_symbol_dim(s: *const CiSymbol) -> usize {
    s.as_ref().map(|s| s.0.n()).unwrap_or(0)
}

/// The regularized trace τ(s) through one route.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ci_symbol_tau(s: *const CiSymbol, route: CiRoute, out: *mut CiComplex) -> CiStatus {
    guard(|| {
        let s = read_sym(s, "s")?;
        let r = match route {
            CiRoute::HeatClosedForm => rtrace::tau(s)?,
            CiRoute::Numeric => rtrace::tau_numeric(s)?,
            CiRoute::Fock => rtrace::tau_fock(s)?,
        };
        write_out(out, r.value.into())
    })
}

/// Residue of the first component of s.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ci_symbol_res(s: *const CiSymbol, out: *mut CiComplex) -> CiStatus {
    guard(|| {
        let s = read_sym(s, "s")?;
        write_out(out, crat_to_c64(&rtrace::res(&s.plus)?).into())
    })
}

/// Runs a JSON run configuration exactly as the command-line tool does.
/// The JSON report goes to `report` (free with `ci_string_free`) and the
/// process exit code the tool would use goes to `exit_code`. Library errors
/// are reported inside the JSON, so the status is `Ok` unless the arguments
/// themselves are unusable.
///
/// # Safety
/// `config_json` must be NUL-terminated; `report` and `exit_code` writable.
#[no_mangle]
pub unsafe extern "C" fn ci_run_json(
    config_json: *const c_char,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> CiStatus {
    guard(|| {
        let text = read_str(config_json, "config_json")?;
        if report.is_null() || exit_code.is_null() {
            return Err(null("output pointer"));
        }
        let (body, code) = match RunConfig::from_json(text).and_then(|c| c.validate().map(|_| c)) {
            Ok(cfg) => cli::run(&cfg),
            Err(e) => cli::error_text(&e),
        };
        let c = CString::new(body).map_err(|e| Fail::Status(CiStatus::InvalidUtf8, e.to_string()))?;
        *report = c.into_raw();
        *exit_code = code;
        Ok(())
    })
}

/// Releases a string returned by the library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ci_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
