use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use rigorkit_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    rk_string_free(p);
    s
}

fn last_error() -> Option<String> {
    let p = rk_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn constants_enclose_reference_values() {
    unsafe {
        for (name, v) in [("PI", std::f64::consts::PI), ("sqrt2", std::f64::consts::SQRT_2)] {
            let mut iv = ptr::null_mut();
            assert_eq!(rk_constant(c(name).as_ptr(), 80, &mut iv), RkStatus::Ok);
            let (mut lo, mut hi) = (0.0, 0.0);
            assert_eq!(rk_interval_bounds(iv, &mut lo, &mut hi), RkStatus::Ok);
            assert!(
                lo <= v && v <= hi && hi - lo <= 2.0 * f64::EPSILON * v,
                "{name}: [{lo}, {hi}]"
            );
            let mut s = ptr::null_mut();
            assert_eq!(rk_interval_to_string(iv, 20, &mut s), RkStatus::Ok);
            assert!(take(s).starts_with('['));
            rk_interval_free(iv);
        }
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut iv = ptr::null_mut();
        assert_eq!(rk_constant(ptr::null(), 64, &mut iv), RkStatus::NullArgument);
        assert!(last_error().unwrap().contains("name"));
        assert_eq!(
            rk_constant(c("PI").as_ptr(), 64, ptr::null_mut()),
            RkStatus::NullArgument
        );
        assert_eq!(rk_constant(c("PI").as_ptr(), 1, &mut iv), RkStatus::InvalidArgument);
        let bad = [0xffu8, 0];
        assert_eq!(rk_constant(bad.as_ptr().cast(), 64, &mut iv), RkStatus::InvalidUtf8);
        // A successful call clears the message.
        assert_eq!(rk_constant(c("PT").as_ptr(), 64, &mut iv), RkStatus::Ok);
        assert!(last_error().is_none());
        rk_interval_free(iv);
        let mut sys = ptr::null_mut();
        assert_eq!(
            rk_lp_system_parse(c("var x\nx * x <= 1\n").as_ptr(), 64, &mut sys),
            RkStatus::Parse
        );
        assert!(sys.is_null());
        let mut a = ptr::null_mut();
        assert_eq!(rk_enumerate(2, 4, false, &mut a), RkStatus::InvalidArgument);
        let (mut lo, mut hi) = (ptr::null_mut(), ptr::null_mut());
        let st = rk_bound_function(
            c("gamma").as_ptr(),
            c("2:2.51").as_ptr(),
            c("0").as_ptr(),
            8,
            &mut lo,
            &mut hi,
        );
        assert_eq!(st, RkStatus::InvalidArgument);
        let st = rk_bound_function(
            c("a0").as_ptr(),
            c("1:3").as_ptr(),
            c("0").as_ptr(),
            1,
            &mut lo,
            &mut hi,
        );
        assert_eq!(st, RkStatus::Computation, "{:?}", last_error());
        // Freeing NULL is a no-op.
        rk_interval_free(ptr::null_mut());
        rk_lp_system_free(ptr::null_mut());
        rk_archive_free(ptr::null_mut());
        rk_string_free(ptr::null_mut());
    }
}

#[test]
fn delta_range_through_the_abi() {
    unsafe {
        let (mut lo, mut hi) = (ptr::null_mut(), ptr::null_mut());
        let st = rk_bound_function(
            c("DELTA").as_ptr(),
            c("2:2.51").as_ptr(),
            c("1/1000").as_ptr(),
            64,
            &mut lo,
            &mut hi,
        );
        assert_eq!(st, RkStatus::Ok);
        assert_eq!(take(lo), "128");
        let hi = rigorkit::numeric::parse_rational(&take(hi)).unwrap();
        assert!(hi <= rigorkit::numeric::rat(501, 1));
    }
}

#[test]
fn lp_round_trip() {
    unsafe {
        let src = c("var x y\nbound 0 <= x <= 1\nbound 0 <= y <= 1\nsum: x + y >= 3\n");
        let mut s = ptr::null_mut();
        assert_eq!(rk_lp_system_parse(src.as_ptr(), 64, &mut s), RkStatus::Ok);
        assert_eq!((rk_lp_system_rows(s), rk_lp_system_cols(s)), (1, 2));
        let mut lp = ptr::null_mut();
        assert_eq!(rk_lp_emit(s, &mut lp), RkStatus::Ok);
        assert!(take(lp).contains("Subject To"));
        let (mut refuted, mut margin) = (false, ptr::null_mut());
        assert_eq!(rk_lp_refute(s, ptr::null(), 0, &mut refuted, &mut margin), RkStatus::Ok);
        assert!(refuted);
        assert_eq!(take(margin), "1");
        assert_eq!(
            rk_lp_check_certificate(s, c("sum 2").as_ptr(), &mut refuted, &mut margin),
            RkStatus::Ok
        );
        assert!(refuted);
        assert_eq!(take(margin), "2");
        assert_eq!(
            rk_lp_check_certificate(s, c("(0)").as_ptr(), &mut refuted, ptr::null_mut()),
            RkStatus::Ok
        );
        assert!(!refuted);
        assert_eq!(
            rk_lp_check_certificate(s, c("(-1)").as_ptr(), &mut refuted, ptr::null_mut()),
            RkStatus::Parse
        );
        let missing = c("/nonexistent/solver");
        assert_eq!(
            rk_lp_refute(s, missing.as_ptr(), 100, &mut refuted, ptr::null_mut()),
            RkStatus::Ok
        );
        assert!(!refuted);
        rk_lp_system_free(s);
    }
}

#[test]
fn archives_through_the_abi() {
    unsafe {
        let mut a = ptr::null_mut();
        assert_eq!(rk_enumerate(0, 6, false, &mut a), RkStatus::Ok);
        let n = rk_archive_len(a);
        assert!(n > 5);
        let mut text = ptr::null_mut();
        assert_eq!(rk_archive_to_text(a, &mut text), RkStatus::Ok);
        let text = c(&take(text));
        let mut b = ptr::null_mut();
        assert_eq!(rk_archive_parse(text.as_ptr(), &mut b), RkStatus::Ok);
        assert_eq!(rk_archive_len(b), n);
        let (mut eq, mut report) = (false, ptr::null_mut());
        assert_eq!(rk_archive_diff(a, b, &mut eq, &mut report), RkStatus::Ok);
        assert!(eq);
        assert!(take(report).starts_with("matched classes"));
        let mut t = ptr::null_mut();
        assert_eq!(rk_enumerate(0, 6, true, &mut t), RkStatus::Ok);
        assert!(rk_archive_len(t) <= n);
        assert_eq!(rk_archive_parse(c("x 1 3 0 1 2").as_ptr(), &mut t), RkStatus::Parse);
        rk_archive_free(a);
        rk_archive_free(b);
    }
}

#[test]
fn corpus_through_the_abi() {
    unsafe {
        let (mut ok, mut json) = (false, ptr::null_mut());
        assert_eq!(
            rk_corpus_run(c("delta-range-*").as_ptr(), 0, &mut ok, &mut json),
            RkStatus::Ok
        );
        assert!(ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["results"].as_array().unwrap().len(), 2);
        assert_eq!(
            rk_corpus_run(c("[").as_ptr(), 0, &mut ok, &mut json),
            RkStatus::InvalidArgument
        );
    }
}

#[test]
fn header_is_current() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/rigorkit.h")).unwrap();
    for f in [
        "rk_version",
        "rk_last_error",
        "rk_string_free",
        "rk_constant",
        "rk_interval_bounds",
        "rk_interval_to_string",
        "rk_interval_free",
        "rk_bound_function",
        "rk_corpus_run",
        "rk_lp_system_parse",
        "rk_lp_system_rows",
        "rk_lp_system_cols",
        "rk_lp_emit",
        "rk_lp_refute",
        "rk_lp_check_certificate",
        "rk_lp_system_free",
        "rk_enumerate",
        "rk_archive_parse",
        "rk_archive_len",
        "rk_archive_to_text",
        "rk_archive_diff",
        "rk_archive_free",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
}

/// Directory holding the static library built alongside this test.
fn lib_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let lib = lib_dir().join("librigorkit_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let out = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(dir.join("include"))
        .arg(dir.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ffi smoke ok"));
}
