//! C ABI over the frontspeed library.
//!
//! Conventions: every entry point returns an [`FsStatus`]; results come back
//! through out-pointers, written only on `FS_STATUS_OK`. Profiles are opaque
//! handles created by [`fs_profile_parse`] and released by
//! [`fs_profile_free`]. No call unwinds across the boundary.

use frontspeed::profiles::CutoffProfile;
use frontspeed::{bounds, speed_core, wavelab, FrontError};
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Call outcome. Nonzero values mirror the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FsStatus {
    /// Success; out-pointers hold results.
    Ok = 0,
    /// A parameter or profile spec failed validation.
    InvalidArgument = 2,
    /// The computation did not converge or left its domain.
    NumericalFailure = 3,
    /// File access failed (table profiles).
    IoFailure = 4,
    /// A required pointer was null.
    NullPointer = 5,
}

fn status_of(err: &FrontError) -> FsStatus {
    match err.exit_code() {
        2 => FsStatus::InvalidArgument,
        4 => FsStatus::IoFailure,
        _ => FsStatus::NumericalFailure,
    }
}

/// Opaque reaction-profile handle.
pub struct FsProfile {
    inner: CutoffProfile,
}

/// Exact cutoff-linear speed scales at one epsilon.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct FsSpeedReport {
    pub epsilon: f64,
    pub phi_star: f64,
    pub c_l: f64,
    pub c_bd: f64,
    pub c_kpp: f64,
    pub c_zfk: f64,
    pub m: f64,
    pub m_zfk_bound: f64,
}

fn guarded<F: FnOnce() -> FsStatus>(body: F) -> FsStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(FsStatus::NumericalFailure)
}

/// Solve the angle equation phi tan phi = |log eps| / 2.
///
/// # Safety
/// `out` must be a valid pointer to a double.
#[no_mangle]
pub unsafe extern "C" fn fs_phi_star(epsilon: f64, out: *mut f64) -> FsStatus {
    if out.is_null() {
        return FsStatus::NullPointer;
    }
    guarded(|| match speed_core::solve_phi_star(epsilon, 1e-12) {
        Ok(phi) => {
            unsafe { *out = phi };
            FsStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Full speed report for the cutoff-linear profile.
///
/// # Safety
/// `out` must be a valid pointer to an `FsSpeedReport`.
#[no_mangle]
pub unsafe extern "C" fn fs_speed_report(epsilon: f64, out: *mut FsSpeedReport) -> FsStatus {
    if out.is_null() {
        return FsStatus::NullPointer;
    }
    guarded(|| match speed_core::linear_front_speed(epsilon) {
        Ok(r) => {
            unsafe {
                *out = FsSpeedReport {
                    epsilon: r.epsilon,
                    phi_star: r.phi_star,
                    c_l: r.c_l,
                    c_bd: r.c_bd,
                    c_kpp: r.c_kpp,
                    c_zfk: r.c_zfk,
                    m: r.m,
                    m_zfk_bound: r.m_zfk_bound,
                };
            }
            FsStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Parse a profile spec (`linear`, `fisher`, `cubic`, `power:B=..,eta=..`,
/// `table:path`) at the given cutoff. On success `*out` owns the handle.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fs_profile_parse(
    spec: *const c_char,
    epsilon: f64,
    out: *mut *mut FsProfile,
) -> FsStatus {
    if spec.is_null() || out.is_null() {
        return FsStatus::NullPointer;
    }
    let Ok(spec) = (unsafe { CStr::from_ptr(spec) }).to_str() else {
        return FsStatus::InvalidArgument;
    };
    guarded(|| match CutoffProfile::parse(spec, epsilon) {
        Ok(profile) => {
            let handle = Box::new(FsProfile { inner: profile });
            unsafe { *out = Box::into_raw(handle) };
            FsStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Release a profile handle. Null is a no-op.
///
/// # Safety
/// `profile` must have come from [`fs_profile_parse`] and not been freed.
#[no_mangle]
pub unsafe extern "C" fn fs_profile_free(profile: *mut FsProfile) {
    if !profile.is_null() {
        drop(unsafe { Box::from_raw(profile) });
    }
}

/// Rigorous two-sided speed bracket for the profile.
///
/// # Safety
/// `profile`, `lower`, and `upper` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn fs_speed_bracket(
    profile: *const FsProfile,
    lower: *mut f64,
    upper: *mut f64,
) -> FsStatus {
    if profile.is_null() || lower.is_null() || upper.is_null() {
        return FsStatus::NullPointer;
    }
    let profile = unsafe { &(*profile).inner };
    guarded(|| match bounds::speed_bracket(profile) {
        Ok((lo, hi)) => {
            unsafe {
                *lower = lo;
                *upper = hi;
            }
            FsStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Traveling-wave speed by phase-plane shooting, bisected to `tol`.
///
/// # Safety
/// `profile` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn fs_shoot_speed(
    profile: *const FsProfile,
    tol: f64,
    out: *mut f64,
) -> FsStatus {
    if profile.is_null() || out.is_null() {
        return FsStatus::NullPointer;
    }
    let profile = unsafe { &(*profile).inner };
    guarded(|| match wavelab::shoot_wave_speed(profile, tol) {
        Ok(c) => {
            unsafe { *out = c };
            FsStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}
