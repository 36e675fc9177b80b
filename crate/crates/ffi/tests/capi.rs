use std::ffi::{CStr, CString};
use std::ptr;

use conserved_ops_ffi::*;

fn last_error() -> String {
    let p = co_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn natural() -> *mut CoConfig {
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { co_config_natural(&mut cfg) }, CoStatus::Ok);
    assert!(!cfg.is_null());
    cfg
}

#[test]
fn version_is_nul_terminated() {
    let v = unsafe { CStr::from_ptr(co_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn natural_config_round_trip() {
    let cfg = natural();
    let mut wc = 0.0;
    assert_eq!(unsafe { co_cyclotron_frequency(cfg, &mut wc) }, CoStatus::Geometry);
    assert_eq!(unsafe { co_config_set_geometry(cfg, 1) }, CoStatus::Ok);
    assert_eq!(unsafe { co_cyclotron_frequency(cfg, &mut wc) }, CoStatus::Ok);
    assert_eq!(wc, 1.0);
    let mut rk = 0.0;
    assert_eq!(unsafe { co_von_klitzing(cfg, &mut rk) }, CoStatus::Ok);
    assert!((rk - 2.0 * std::f64::consts::PI).abs() < 1e-14);
    unsafe { co_config_free(cfg) };
}

#[test]
fn bad_json_reports_config_error() {
    let json = CString::new("{ not json").unwrap();
    let mut cfg = ptr::null_mut();
    let status = unsafe { co_config_from_json(json.as_ptr(), &mut cfg) };
    assert_eq!(status, CoStatus::Config);
    assert!(cfg.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn null_arguments_are_rejected() {
    assert_eq!(unsafe { co_config_natural(ptr::null_mut()) }, CoStatus::NullPointer);
    let mut wc = 0.0;
    assert_eq!(
        unsafe { co_cyclotron_frequency(ptr::null(), &mut wc) },
        CoStatus::NullPointer
    );
    assert!(last_error().contains("cfg"));
    unsafe {
        co_config_free(ptr::null_mut());
        co_solution_free(ptr::null_mut());
        co_string_free(ptr::null_mut());
    }
}

#[test]
fn success_clears_the_error() {
    assert_eq!(unsafe { co_config_natural(ptr::null_mut()) }, CoStatus::NullPointer);
    let cfg = natural();
    assert!(co_last_error_message().is_null());
    unsafe { co_config_free(cfg) };
}

#[test]
fn electric_solution_matches_closed_form() {
    let cfg = natural();
    let mut sol = ptr::null_mut();
    assert_eq!(unsafe { co_solution_electric(cfg, &mut sol) }, CoStatus::Ok);
    let (x, t) = (0.7, 1.3);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(
        unsafe { co_solution_eval(sol, x, 0.0, 0.0, t, &mut re, &mut im) },
        CoStatus::Ok
    );
    // phi = exp(i (x t - t^3 / 6)) / sqrt(L) with m = q = E = hbar = 1, L = 10
    let phase = x * t - t.powi(3) / 6.0;
    let amp = 1.0 / 10f64.sqrt();
    assert!((re - amp * phase.cos()).abs() < 1e-14);
    assert!((im - amp * phase.sin()).abs() < 1e-14);

    let mut shifted = ptr::null_mut();
    assert_eq!(
        unsafe { co_solution_electric_shifted(cfg, 0.4, &mut shifted) },
        CoStatus::Ok
    );
    let (mut re2, mut im2) = (0.0, 0.0);
    unsafe { co_solution_eval(shifted, x, 0.0, 0.0, t + 0.4, &mut re2, &mut im2) };
    assert!((re2 - re).abs() < 1e-14 && (im2 - im).abs() < 1e-14);
    unsafe {
        co_solution_free(sol);
        co_solution_free(shifted);
        co_config_free(cfg);
    }
}

#[test]
fn landau_requires_parallel_geometry_and_valid_family() {
    let cfg = natural();
    assert_eq!(unsafe { co_config_set_geometry(cfg, 7) }, CoStatus::InvalidArgument);
    assert_eq!(unsafe { co_config_set_geometry(cfg, 1) }, CoStatus::Ok);
    let mut sol = ptr::null_mut();
    assert_eq!(
        unsafe { co_solution_landau(cfg, 9, 0, 0.0, &mut sol) },
        CoStatus::InvalidArgument
    );
    assert_eq!(unsafe { co_solution_landau(cfg, 0, 0, 0.0, &mut sol) }, CoStatus::Ok);
    let (mut re, mut im) = (0.0, 0.0);
    unsafe { co_solution_eval(sol, 0.0, 0.0, 0.0, 0.0, &mut re, &mut im) };
    assert!(re.hypot(im) > 0.0);
    unsafe {
        co_solution_free(sol);
        co_config_free(cfg);
    }
}

#[test]
fn quantization_unit_quantum() {
    let cfg = natural();
    let dx = 1.0;
    let dt = 2.0 * std::f64::consts::PI;
    let mut q = CoQuantization::default();
    assert_eq!(
        unsafe { co_quantization_report(cfg, dx, dt, 1e-8, &mut q) },
        CoStatus::Ok
    );
    assert_eq!(q.n, 1);
    assert!(q.is_quantized);
    assert!((q.resistance_in_klitzing - 1.0).abs() < 1e-12);
    assert!((q.phase_re - 1.0).abs() < 1e-9 && q.phase_im.abs() < 1e-9);

    let status = unsafe { co_quantization_report(cfg, dx, 0.0, 1e-8, &mut q) };
    assert_eq!(status, CoStatus::Domain);
    assert!(last_error().contains("dt"));
    unsafe { co_config_free(cfg) };
}

#[test]
fn heisenberg_residual_through_strings() {
    let h = CString::new("px^2/(2*m) - q*E*x").unwrap();
    let conserved = CString::new("px - q*E*t").unwrap();
    let moving = CString::new("x").unwrap();
    let mut zero = false;
    let mut text = ptr::null_mut();
    unsafe {
        assert_eq!(
            co_heisenberg_residual(conserved.as_ptr(), h.as_ptr(), &mut zero, &mut text),
            CoStatus::Ok
        );
        assert!(zero);
        assert_eq!(CStr::from_ptr(text).to_str().unwrap(), "0");
        co_string_free(text);

        assert_eq!(
            co_heisenberg_residual(moving.as_ptr(), h.as_ptr(), &mut zero, ptr::null_mut()),
            CoStatus::Ok
        );
        assert!(!zero);
    }
    let bad = CString::new("x +* y").unwrap();
    let status = unsafe { co_heisenberg_residual(bad.as_ptr(), h.as_ptr(), &mut zero, ptr::null_mut()) };
    assert_eq!(status, CoStatus::Parse);
}

#[test]
fn verify_symbolic_suite() {
    let cfg = natural();
    let suites = CString::new("symbolic").unwrap();
    let (mut total, mut failures) = (0u32, 0u32);
    assert_eq!(
        unsafe { co_verify(cfg, suites.as_ptr(), &mut total, &mut failures) },
        CoStatus::Ok
    );
    assert!(total > 0);
    assert_eq!(failures, 0);
    let bogus = CString::new("symbolic,nonsense").unwrap();
    assert_ne!(
        unsafe { co_verify(cfg, bogus.as_ptr(), &mut total, &mut failures) },
        CoStatus::Ok
    );
    unsafe { co_config_free(cfg) };
}
