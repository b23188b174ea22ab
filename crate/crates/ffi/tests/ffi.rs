use metocean_joint_ffi::*;
use std::ffi::{c_void, CStr};
use std::process::Command;

fn last_error() -> String {
    let p = mj_last_error_message();
    assert!(!p.is_null());
    // SAFETY: non-null message owned by the library's thread-local slot.
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn exponential_sample(n: usize) -> Vec<f64> {
    (0..n).map(|i| -((i as f64 + 0.5) / n as f64).ln()).collect()
}

#[test]
fn marginal_handle_lifecycle() {
    let x = exponential_sample(3000);
    let mut h = std::ptr::null_mut();
    // SAFETY: valid buffers and out-pointer.
    unsafe {
        assert_eq!(mj_marginal_fit(x.as_ptr(), x.len(), 0.9, 50.0, &mut h), MjStatus::MjOk);
        let mut p = MjMarginalParams::default();
        assert_eq!(mj_marginal_params(h, &mut p), MjStatus::MjOk);
        assert_eq!(p.n, 3000);
        assert!((p.tail_fraction - 0.1).abs() < 1e-3);
        let (mut g, mut back) = (0.0, 0.0);
        assert_eq!(mj_marginal_to_gumbel(h, 3.0, &mut g), MjStatus::MjOk);
        assert_eq!(mj_marginal_from_gumbel(h, g, &mut back), MjStatus::MjOk);
        assert!((back - 3.0).abs() < 1e-9);
        let mut rv = 0.0;
        assert_eq!(mj_marginal_return_value(h, 100.0, &mut rv), MjStatus::MjOk);
        assert!(rv > 3.0);
        assert_eq!(mj_marginal_return_value(h, 1e-6, &mut rv), MjStatus::MjErrInvalidInput);
        assert!(!last_error().is_empty());
        mj_marginal_free(h);
        mj_marginal_free(std::ptr::null_mut());
    }
}

#[test]
fn null_pointers_are_reported() {
    let mut h = std::ptr::null_mut();
    // SAFETY: null inputs are the point of the test.
    unsafe {
        assert_eq!(mj_marginal_fit(std::ptr::null(), 5, 0.9, 1.0, &mut h), MjStatus::MjErrNullPointer);
        assert!(last_error().contains("values"));
        assert!(h.is_null());
        let mut out = 0.0;
        assert_eq!(mj_marginal_to_gumbel(std::ptr::null(), 1.0, &mut out), MjStatus::MjErrNullPointer);
        assert_eq!(mj_failure_probability(3.0, std::ptr::null_mut()), MjStatus::MjErrNullPointer);
    }
}

#[test]
fn too_few_exceedances_is_input_error() {
    let x = [1.0, 2.0, 3.0, 4.0, 5.0];
    let mut h = std::ptr::null_mut();
    // SAFETY: valid buffers.
    let s = unsafe { mj_marginal_fit(x.as_ptr(), x.len(), 0.5, 1.0, &mut h) };
    assert_eq!(s, MjStatus::MjErrInvalidInput);
    assert!(h.is_null());
}

#[test]
fn ht_fit_and_simulate() {
    // comonotone Gumbel pairs with a little scatter
    let n = 4000;
    let x: Vec<f64> = (0..n).map(|i| -(-((i as f64 + 0.5) / n as f64).ln()).ln()).collect();
    let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v + 0.01 * ((i * 7919) % 13) as f64).collect();
    let mut h = std::ptr::null_mut();
    // SAFETY: valid buffers and handles.
    unsafe {
        assert_eq!(mj_ht_fit(x.as_ptr(), y.as_ptr(), n, 2.0, &mut h), MjStatus::MjOk);
        let mut p = MjHtParams::default();
        assert_eq!(mj_ht_params(h, &mut p), MjStatus::MjOk);
        assert!(p.alpha > 0.95, "{p:?}");
        let (mut sx, mut sy) = (vec![0.0; 100], vec![0.0; 100]);
        assert_eq!(mj_ht_simulate(h, 100, 3.0, 7, sx.as_mut_ptr(), sy.as_mut_ptr()), MjStatus::MjOk);
        assert!(sx.iter().all(|&v| v > 3.0));
        let (mut tx, mut ty) = (vec![0.0; 100], vec![0.0; 100]);
        assert_eq!(mj_ht_simulate(h, 100, 3.0, 7, tx.as_mut_ptr(), ty.as_mut_ptr()), MjStatus::MjOk);
        assert_eq!(sy, ty);
        assert_eq!(mj_ht_simulate(h, 10, 0.0, 7, tx.as_mut_ptr(), ty.as_mut_ptr()), MjStatus::MjErrInvalidInput);
        mj_ht_free(h);
    }
}

unsafe extern "C" fn plane(u: *const f64, dim: usize, user: *mut c_void) -> f64 {
    // SAFETY: the library passes `dim` readable values; user points at an f64.
    let u = unsafe { std::slice::from_raw_parts(u, dim) };
    let b = unsafe { *(user as *const f64) };
    b - u.iter().sum::<f64>()
}

#[test]
fn form_callback() {
    let mut b = 6.0f64;
    let mut u = [0.0; 2];
    let mut r = MjFormResult::default();
    // SAFETY: callback and buffers valid for dim = 2.
    let s = unsafe {
        mj_form_search(Some(plane), (&mut b as *mut f64).cast(), 2, std::ptr::null(), u.as_mut_ptr(), &mut r)
    };
    assert_eq!(s, MjStatus::MjOk);
    assert!((r.beta - 18f64.sqrt()).abs() < 1e-8);
    assert!((u[0] - 3.0).abs() < 1e-6 && (u[1] - 3.0).abs() < 1e-6);
    // SAFETY: a NULL callback is rejected before use.
    let s = unsafe { mj_form_search(None, std::ptr::null_mut(), 2, std::ptr::null(), u.as_mut_ptr(), &mut r) };
    assert_eq!(s, MjStatus::MjErrInvalidInput);
}

#[test]
fn contour_first_point_is_weibull_quantile() {
    let m = MjHaverNutzen { weibull_alpha: 2.5, weibull_beta: 1.5, a1: 1.2, a2: 0.55, a3: 0.45, b1: 0.01, b2: 0.08, b3: 0.3 };
    let (mut hs, mut tp, mut beta) = (vec![0.0; 36], vec![0.0; 36], 0.0);
    // SAFETY: buffers sized for 36 points.
    let s = unsafe { mj_hn_contour(&m, 100.0, 2922.0, 36, hs.as_mut_ptr(), tp.as_mut_ptr(), &mut beta) };
    assert_eq!(s, MjStatus::MjOk);
    let q = 2.5 * (100.0f64 * 2922.0).ln().powf(1.0 / 1.5);
    assert!((hs[0] - q).abs() < 1e-6, "{} vs {q}", hs[0]);
    let bad = MjHaverNutzen { weibull_alpha: -1.0, ..m };
    // SAFETY: as above.
    let s = unsafe { mj_hn_contour(&bad, 100.0, 2922.0, 36, hs.as_mut_ptr(), tp.as_mut_ptr(), &mut beta) };
    assert_eq!(s, MjStatus::MjErrInvalidInput);
}

#[test]
fn version_string() {
    // SAFETY: static NUL-terminated string.
    let v = unsafe { CStr::from_ptr(mj_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/metocean_joint.h")).unwrap();
    for f in [
        "mj_version", "mj_last_error_message", "mj_marginal_fit", "mj_marginal_free", "mj_marginal_params",
        "mj_marginal_to_gumbel", "mj_marginal_from_gumbel", "mj_marginal_return_value", "mj_ht_fit", "mj_ht_free",
        "mj_ht_params", "mj_ht_simulate", "mj_failure_probability", "mj_form_search", "mj_hn_contour",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct MjMarginal MjMarginal;"));
}

/// Compiles and runs a C program against the generated header and static library.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libmetocean_joint_ffi.a");
    if !lib.exists() {
        eprintln!("static library not built at {}; C link check not run", lib.display());
        return;
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let manifest = env!("CARGO_MANIFEST_DIR");
    let status = Command::new(&cc)
        .args([
            "-std=c11",
            "-Wall",
            "-Werror",
            "-I",
            &format!("{manifest}/include"),
            &format!("{manifest}/tests/c/smoke.c"),
        ])
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "C compilation failed"),
        Err(e) => {
            eprintln!("no C compiler ({e}); C link check not run");
            return;
        }
    }
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
