use contact_index_ffi::*;
use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

fn parse(text: &str, n: usize, grade: Option<i32>) -> (CiStatus, *mut CiSymbol) {
    let t = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    let g = grade.as_ref().map_or(ptr::null(), |g| g as *const i32);
    let st = unsafe { ci_symbol_parse(t.as_ptr(), n, n + 3, g, &mut out) };
    (st, out)
}

fn tau(s: *const CiSymbol, route: CiRoute) -> CiComplex {
    let mut z = CiComplex::default();
    assert_eq!(unsafe { ci_symbol_tau(s, route, &mut z) }, CiStatus::Ok);
    z
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ci_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn resolvent_trace_agrees_across_routes() {
    let (st, s) = parse("resolvent(Q, 1/3)", 1, Some(0));
    assert_eq!(st, CiStatus::Ok);
    assert_eq!(unsafe { ci_symbol_dim(s) }, 1);
    let a = tau(s, CiRoute::HeatClosedForm);
    let b = tau(s, CiRoute::Numeric);
    let c = tau(s, CiRoute::Fock);
    assert!((a.re - b.re).abs() < 1e-6 && (a.re - c.re).abs() < 1e-6, "{a:?} {b:?} {c:?}");
    let mut r = CiComplex::default();
    assert_eq!(unsafe { ci_symbol_res(s, &mut r) }, CiStatus::Ok);
    unsafe { ci_symbol_free(s) };
}

#[test]
fn products_and_sums_of_handles() {
    let (_, s) = parse("2*exp(-Q)", 1, None);
    let (_, q) = parse("Q", 1, None);
    let mut qs = ptr::null_mut();
    assert_eq!(unsafe { ci_symbol_mul(q, s, &mut qs) }, CiStatus::Ok);
    // Q#s = s for n = 1
    assert!((tau(qs, CiRoute::HeatClosedForm).re - 1.0).abs() < 1e-12);
    let mut sum = ptr::null_mut();
    assert_eq!(unsafe { ci_symbol_add(qs, s, &mut sum) }, CiStatus::Ok);
    assert!((tau(sum, CiRoute::Fock).re - 2.0).abs() < 1e-12);
    // x1 has odd grade relative to s
    let (_, x) = parse("x1", 1, None);
    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { ci_symbol_add(x, s, &mut bad) }, CiStatus::NotInAlgebraA);
    assert!(bad.is_null());
    for h in [s, q, x, qs, sum] {
        unsafe { ci_symbol_free(h) };
    }
}

#[test]
fn errors_map_to_codes() {
    let (st, s) = parse("Q +", 1, None);
    assert_eq!(st, CiStatus::Parse);
    assert!(s.is_null());
    assert!(!last_error().is_empty());
    let (st, _) = parse("resolvent(Q, 1/3)", 1, Some(-1));
    assert_eq!(st, CiStatus::NotInAlgebraA);
    let mut z = CiComplex::default();
    assert_eq!(unsafe { ci_symbol_tau(ptr::null(), CiRoute::Fock, &mut z) }, CiStatus::NullArgument);
    let bytes = [0xffu8, 0];
    let mut out = ptr::null_mut();
    let st = unsafe { ci_symbol_parse(bytes.as_ptr() as *const _, 1, 4, ptr::null(), &mut out) };
    assert_eq!(st, CiStatus::InvalidUtf8);
    unsafe { ci_symbol_free(ptr::null_mut()) };
    unsafe { ci_string_free(ptr::null_mut()) };
}

#[test]
fn run_json_matches_the_cli() {
    let cfg = CString::new(r#"{"schema": 1, "command": "verify", "suite": "trace-table"}"#).unwrap();
    let mut report = ptr::null_mut();
    let mut code = -1;
    assert_eq!(unsafe { ci_run_json(cfg.as_ptr(), &mut report, &mut code) }, CiStatus::Ok);
    let text = unsafe { CStr::from_ptr(report) }.to_str().unwrap().to_owned();
    unsafe { ci_string_free(report) };
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["passed"], true);

    let bad = CString::new(r#"{"schema": 7}"#).unwrap();
    assert_eq!(unsafe { ci_run_json(bad.as_ptr(), &mut report, &mut code) }, CiStatus::Ok);
    let text = unsafe { CStr::from_ptr(report) }.to_str().unwrap().to_owned();
    unsafe { ci_string_free(report) };
    assert_eq!(code, 2);
    assert!(text.contains("\"kind\": \"Config\""), "{text}");
}

/// The static library built alongside this test binary; `cargo test` leaves
/// it in deps/, `cargo build` uplifts it one level.
fn static_lib() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let name = "libcontact_index_ffi.a";
    [deps.join(name), deps.parent().unwrap().join(name)]
        .into_iter()
        .find(|p| p.exists())
        .unwrap_or_else(|| panic!("{name} not found next to {}", exe.display()))
}

#[test]
fn c_program_links_against_the_header() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = static_lib();
    let exe = Path::new(env!("CARGO_TARGET_TMPDIR")).join("ffi_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("cc");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
