//! C ABI for rigorkit.
//!
//! Objects cross the boundary as opaque handles created by `rk_*_parse` /
//! `rk_*_new` style constructors and released by the matching `rk_*_free`.
//! Every fallible call returns an [`RkStatus`]; on failure a message is kept
//! per thread and can be read with [`rk_last_error`]. Strings returned
//! through `out` parameters are owned by the caller and must be released
//! with [`rk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Duration;

use rigorkit::bernstein::range_enclosure;
use rigorkit::hypermap::{archive_diff, enumerate, Archive, FaceSizeBaseline, Limits, Successors};
use rigorkit::kepler::{builtin_corpus, run_corpus, FunctionName, GeometricFunction};
use rigorkit::lp::{
    check_certificate, emit_lp, parse_solution_named, refute, CertificateVerdict, ConstraintFile, IntervalLinearSystem,
    SolverChoice,
};
use rigorkit::numeric::{enclose_constant, parse_rational, rational_to_string, ConstantName, Interval};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    /// A computation ran but could not produce a result (budget, domain).
    Computation = 5,
    Panic = 6,
}

/// Outward-rounded enclosure of a real number.
pub struct RkInterval(Interval);

/// Interval linear system `A x <= b`.
pub struct RkLpSystem(IntervalLinearSystem);

/// Archive of final plane graphs.
pub struct RkArchive(Archive);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (RkStatus, String);

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RkStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal error: {msg}"));
            RkStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (RkStatus::NullArgument, format!("`{what}` is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (RkStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn rk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn rk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn rk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Enclosure of a named constant (`PI`, `SQRT2`, `ATAN_SQRT2_OVER_5`, `PT`,
/// `DELTA_OCT`) at `bits` bits of precision.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_constant(name: *const c_char, bits: u32, out: *mut *mut RkInterval) -> RkStatus {
    guard(|| {
        let n: ConstantName = text(name, "name")?
            .parse()
            .map_err(|_| (RkStatus::InvalidArgument, "unknown constant".to_string()))?;
        if !(2..=1 << 16).contains(&bits) {
            return Err((RkStatus::InvalidArgument, "bits must be in 2..=65536".into()));
        }
        let iv = Box::new(RkInterval(enclose_constant(n, bits)));
        put(out, Box::into_raw(iv), "out")
    })
}

/// Endpoints rounded outward to doubles.
///
/// # Safety
/// `iv` must be a live handle; `lo` and `hi` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_interval_bounds(iv: *const RkInterval, lo: *mut f64, hi: *mut f64) -> RkStatus {
    guard(|| {
        let iv = &handle(iv, "iv")?.0;
        let l = iv.lo().round_down(53).to_f64();
        let h = iv.hi().round_up(53).to_f64();
        put(lo, l, "lo")?;
        put(hi, h, "hi")
    })
}

/// Decimal rendering `[lo, hi]` with `digits` significant digits, rounded
/// outward.
///
/// # Safety
/// `iv` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_interval_to_string(iv: *const RkInterval, digits: u32, out: *mut *mut c_char) -> RkStatus {
    guard(|| {
        let s = handle(iv, "iv")?.0.to_decimal_string(digits.max(1) as usize);
        put(out, owned(s), "out")
    })
}

/// # Safety
/// `iv` must be NULL or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn rk_interval_free(iv: *mut RkInterval) {
    if !iv.is_null() {
        drop(Box::from_raw(iv));
    }
}

/// Certified range of a built-in polynomial function (`DELTA`, `A0`..`A3`)
/// over a box `lo:hi[,lo:hi..]` by Bernstein subdivision. The endpoints
/// are exact rationals written as strings.
///
/// # Safety
/// String arguments must be nul-terminated; `out_lo` and `out_hi` writable.
#[no_mangle]
pub unsafe extern "C" fn rk_bound_function(
    function: *const c_char,
    domain: *const c_char,
    tolerance: *const c_char,
    budget: usize,
    out_lo: *mut *mut c_char,
    out_hi: *mut *mut c_char,
) -> RkStatus {
    guard(|| {
        let name = match text(function, "function")?.to_ascii_uppercase().as_str() {
            "DELTA" => FunctionName::Delta,
            "A0" => FunctionName::A0,
            "A1" => FunctionName::A1,
            "A2" => FunctionName::A2,
            "A3" => FunctionName::A3,
            other => return Err((RkStatus::InvalidArgument, format!("no polynomial function `{other}`"))),
        };
        let g = GeometricFunction::get(name);
        let p = g.poly.expect("polynomial functions carry their polynomial");
        let b = rigorkit::cli::parse_box(text(domain, "domain")?, 6).map_err(|e| (RkStatus::Parse, e.to_string()))?;
        let tol = parse_rational(text(tolerance, "tolerance")?).map_err(|e| (RkStatus::Parse, e.to_string()))?;
        let enc = range_enclosure(&p, &b, &tol, budget).map_err(|e| (RkStatus::Computation, e.to_string()))?;
        put(out_lo, owned(rational_to_string(&enc.lo)), "out_lo")?;
        put(out_hi, owned(rational_to_string(&enc.hi)), "out_hi")
    })
}

/// Run the built-in inequality corpus. `filter` may be NULL (all entries);
/// `budget` 0 keeps each entry's own budget. `all_ok` reports whether every
/// PaperStated entry was proven; `out_json` receives the full report.
///
/// # Safety
/// `filter` must be NULL or nul-terminated; `all_ok` and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn rk_corpus_run(
    filter: *const c_char,
    budget: usize,
    all_ok: *mut bool,
    out_json: *mut *mut c_char,
) -> RkStatus {
    guard(|| {
        let f = if filter.is_null() {
            None
        } else {
            Some(text(filter, "filter")?)
        };
        let budget = (budget > 0).then_some(budget);
        let r = run_corpus(&builtin_corpus(), f, budget).map_err(|e| (RkStatus::InvalidArgument, e.to_string()))?;
        put(all_ok, r.ok(), "all_ok")?;
        put(
            out_json,
            owned(serde_json::to_string(&r).expect("serializable")),
            "out_json",
        )
    })
}

/// Parse a constraint file; irrational coefficients are enclosed at `bits`.
///
/// # Safety
/// `source` must be nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rk_lp_system_parse(source: *const c_char, bits: u32, out: *mut *mut RkLpSystem) -> RkStatus {
    guard(|| {
        let f = ConstraintFile::parse(text(source, "source")?).map_err(|e| (RkStatus::Parse, e.to_string()))?;
        let s = f.normalize(bits).map_err(|e| (RkStatus::Parse, e.to_string()))?;
        put(out, Box::into_raw(Box::new(RkLpSystem(s))), "out")
    })
}

/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rk_lp_system_rows(s: *const RkLpSystem) -> usize {
    s.as_ref().map_or(0, |s| s.0.rows())
}

/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rk_lp_system_cols(s: *const RkLpSystem) -> usize {
    s.as_ref().map_or(0, |s| s.0.cols())
}

/// The midpoint LP handed to external solvers, in CPLEX LP format.
///
/// # Safety
/// `s` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rk_lp_emit(s: *const RkLpSystem, out: *mut *mut c_char) -> RkStatus {
    guard(|| put(out, owned(emit_lp(&handle(s, "s")?.0)), "out"))
}

fn write_verdict(v: CertificateVerdict, refuted: *mut bool, margin: *mut *mut c_char) -> Result<(), Failure> {
    unsafe {
        put(refuted, v.is_refuted(), "refuted")?;
        if !margin.is_null() {
            let m = match &v {
                CertificateVerdict::Refuted { margin } => owned(rational_to_string(margin)),
                CertificateVerdict::NotRefuted { .. } => std::ptr::null_mut(),
            };
            margin.write(m);
        }
    }
    Ok(())
}

/// Search for Farkas multipliers and check them exactly. `solver` NULL uses
/// the built-in solver; otherwise it is run as `solver problem.lp solution`.
/// `margin` may be NULL; when set it receives the exact margin of a
/// refutation, or NULL.
///
/// # Safety
/// `s` must be a live handle; `solver` NULL or nul-terminated; `refuted`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn rk_lp_refute(
    s: *const RkLpSystem,
    solver: *const c_char,
    timeout_ms: u64,
    refuted: *mut bool,
    margin: *mut *mut c_char,
) -> RkStatus {
    guard(|| {
        let s = &handle(s, "s")?.0;
        let choice = if solver.is_null() {
            SolverChoice::Builtin
        } else {
            SolverChoice::External {
                path: PathBuf::from(text(solver, "solver")?),
                timeout: Duration::from_millis(timeout_ms),
            }
        };
        let v = refute(s, &choice).map_err(|e| (RkStatus::Computation, e.to_string()))?;
        write_verdict(v, refuted, margin)
    })
}

/// Check multipliers given as `name value` lines or a `(v0, v1, ..)` vector.
///
/// # Safety
/// `s` must be a live handle; `solution` nul-terminated; `refuted` writable;
/// `margin` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn rk_lp_check_certificate(
    s: *const RkLpSystem,
    solution: *const c_char,
    refuted: *mut bool,
    margin: *mut *mut c_char,
) -> RkStatus {
    guard(|| {
        let s = &handle(s, "s")?.0;
        let cert = parse_solution_named(text(solution, "solution")?, s.rows(), &s.row_names)
            .map_err(|e| (RkStatus::Parse, e.to_string()))?;
        let v = check_certificate(s, &cert).map_err(|e| (RkStatus::InvalidArgument, e.to_string()))?;
        write_verdict(v, refuted, margin)
    })
}

/// # Safety
/// `s` must be NULL or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn rk_lp_system_free(s: *mut RkLpSystem) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Final graphs reachable from the seed with `p + 3` outer vertices, up to
/// `max_vertices`. `tame` selects tame successors with triangle
/// finalization.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rk_enumerate(p: u32, max_vertices: usize, tame: bool, out: *mut *mut RkArchive) -> RkStatus {
    guard(|| {
        if max_vertices < p as usize + 3 {
            return Err((RkStatus::InvalidArgument, "max_vertices is below p + 3".into()));
        }
        let baseline = FaceSizeBaseline;
        let succ = if tame {
            Successors::Tame(&baseline)
        } else {
            Successors::Plane
        };
        let e = enumerate(p, succ, Limits::vertices(max_vertices));
        let a = Archive::from_graphs("g", &e.graphs).map_err(|e| (RkStatus::Computation, e.to_string()))?;
        put(out, Box::into_raw(Box::new(RkArchive(a))), "out")
    })
}

/// Parse an archive in the text or JSON format.
///
/// # Safety
/// `source` must be nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rk_archive_parse(source: *const c_char, out: *mut *mut RkArchive) -> RkStatus {
    guard(|| {
        let a = Archive::parse(text(source, "source")?).map_err(|e| (RkStatus::Parse, e.to_string()))?;
        put(out, Box::into_raw(Box::new(RkArchive(a))), "out")
    })
}

/// # Safety
/// `a` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rk_archive_len(a: *const RkArchive) -> usize {
    a.as_ref().map_or(0, |a| a.0.len())
}

/// # Safety
/// `a` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rk_archive_to_text(a: *const RkArchive, out: *mut *mut c_char) -> RkStatus {
    guard(|| put(out, owned(handle(a, "a")?.0.to_text()), "out"))
}

/// Compare two archives up to isomorphism. `report` may be NULL.
///
/// # Safety
/// `a` and `b` must be live handles; `equivalent` writable.
#[no_mangle]
pub unsafe extern "C" fn rk_archive_diff(
    a: *const RkArchive,
    b: *const RkArchive,
    equivalent: *mut bool,
    report: *mut *mut c_char,
) -> RkStatus {
    guard(|| {
        let d = archive_diff(&handle(a, "a")?.0, &handle(b, "b")?.0);
        put(equivalent, d.is_equivalent(), "equivalent")?;
        if !report.is_null() {
            report.write(owned(d.report()));
        }
        Ok(())
    })
}

/// # Safety
/// `a` must be NULL or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn rk_archive_free(a: *mut RkArchive) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}
