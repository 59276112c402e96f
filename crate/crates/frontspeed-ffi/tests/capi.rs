//! Exercises the C entry points exactly as a C caller would: through raw
//! pointers and status codes.

use frontspeed_ffi::*;
use std::ffi::CString;
use std::ptr;

#[test]
fn phi_star_round_trip() {
    let mut phi = 0.0_f64;
    let status = unsafe { fs_phi_star(0.20787957635076193, &mut phi) };
    assert_eq!(status, FsStatus::Ok);
    assert!((phi - std::f64::consts::FRAC_PI_4).abs() < 1e-12);

    assert_eq!(unsafe { fs_phi_star(0.1, ptr::null_mut()) }, FsStatus::NullPointer);
    let mut sink = 0.0;
    assert_eq!(unsafe { fs_phi_star(1.5, &mut sink) }, FsStatus::InvalidArgument);
    assert_eq!(unsafe { fs_phi_star(f64::NAN, &mut sink) }, FsStatus::InvalidArgument);
}

#[test]
fn speed_report_matches_library() {
    let mut report = FsSpeedReport {
        epsilon: 0.0,
        phi_star: 0.0,
        c_l: 0.0,
        c_bd: 0.0,
        c_kpp: 0.0,
        c_zfk: 0.0,
        m: 0.0,
        m_zfk_bound: 0.0,
    };
    let status = unsafe { fs_speed_report(0.05, &mut report) };
    assert_eq!(status, FsStatus::Ok);
    let native = frontspeed::speed_core::linear_front_speed(0.05).unwrap();
    assert_eq!(report.c_l, native.c_l);
    assert_eq!(report.phi_star, native.phi_star);
    assert_eq!(report.m, native.m);
    assert_eq!(report.c_kpp, 2.0);
}

#[test]
fn profile_lifecycle_and_computations() {
    let spec = CString::new("fisher").unwrap();
    let mut handle: *mut FsProfile = ptr::null_mut();
    let status = unsafe { fs_profile_parse(spec.as_ptr(), 0.1, &mut handle) };
    assert_eq!(status, FsStatus::Ok);
    assert!(!handle.is_null());

    let (mut lo, mut hi) = (0.0_f64, 0.0_f64);
    assert_eq!(
        unsafe { fs_speed_bracket(handle, &mut lo, &mut hi) },
        FsStatus::Ok
    );
    let mut shot = 0.0_f64;
    assert_eq!(unsafe { fs_shoot_speed(handle, 1e-8, &mut shot) }, FsStatus::Ok);
    assert!(
        lo - 1e-3 <= shot && shot <= hi + 1e-4,
        "shot {shot} outside [{lo}, {hi}]"
    );
    assert!((shot - 1.2519411731).abs() < 1e-6);

    unsafe { fs_profile_free(handle) };
    unsafe { fs_profile_free(ptr::null_mut()) }; // null is a no-op
}

#[test]
fn parse_failures_map_to_statuses() {
    let mut handle: *mut FsProfile = ptr::null_mut();

    let unknown = CString::new("quartic").unwrap();
    assert_eq!(
        unsafe { fs_profile_parse(unknown.as_ptr(), 0.1, &mut handle) },
        FsStatus::InvalidArgument
    );

    let missing = CString::new("table:/no/such/table.csv").unwrap();
    assert_eq!(
        unsafe { fs_profile_parse(missing.as_ptr(), 0.1, &mut handle) },
        FsStatus::IoFailure
    );

    let linear = CString::new("linear").unwrap();
    assert_eq!(
        unsafe { fs_profile_parse(linear.as_ptr(), -0.5, &mut handle) },
        FsStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { fs_profile_parse(ptr::null(), 0.1, &mut handle) },
        FsStatus::NullPointer
    );
}

#[test]
fn generated_header_covers_the_surface() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/frontspeed.h"
    ))
    .expect("cbindgen header exists after build");
    for symbol in [
        "fs_phi_star",
        "fs_speed_report",
        "fs_profile_parse",
        "fs_profile_free",
        "fs_speed_bracket",
        "fs_shoot_speed",
        "FsSpeedReport",
        "FsProfile",
        "FsStatus",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
    assert!(header.contains("FRONTSPEED_H"));
}
