//! Exact and asymptotic front speeds for the cutoff-linearized KPP problem.
//!
//! The selected speed solves the grazing condition of the dispersion
//! relation: with T = |log epsilon| / 2, the angle phi* in (0, pi/2) obeys
//! phi* tan(phi*) = T, and the front speed is c_L = 2 sin(phi*).

use crate::error::{check_epsilon, FrontError, Result};
use std::f64::consts::{FRAC_PI_2, PI};

/// Speeds and variational companions at one cutoff value.
#[derive(Debug, Clone, Copy)]
pub struct SpeedReport {
    pub epsilon: f64,
    pub phi_star: f64,
    /// Exact cutoff-linear speed 2 sin(phi*).
    pub c_l: f64,
    /// Brunet–Derrida asymptote 2 - pi^2 / log^2(epsilon).
    pub c_bd: f64,
    /// Pulled speed of the cutoff-free problem under unit growth rate.
    pub c_kpp: f64,
    /// ZFK (variational trial) speed sqrt(1 - epsilon^2) of the linear profile.
    pub c_zfk: f64,
    /// Variational level M = c_l^2 / 2 = 2 sin^2(phi*).
    pub m: f64,
    /// Coarse upper bound 2 (1 - eps^2) / (1 + eps^2)^2 for the functional.
    pub m_zfk_bound: f64,
}

/// How a sweep places its epsilon samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

/// Root of phi tan(phi) = |log epsilon| / 2 in (0, pi/2).
///
/// The left side grows monotonically from 0 to infinity on (0, pi/2), so the
/// root is unique. Bisection localizes it, Newton polishes; `tol` bounds the
/// accepted residual |phi tan(phi) - T|.
pub fn solve_phi_star(epsilon: f64, tol: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(FrontError::ParameterOutOfRange(format!(
            "phi* residual tolerance must be positive, got {tol}"
        )));
    }
    let t = 0.5 * epsilon.ln().abs();
    let mut phi = if t > 5.0 {
        // Near-grazing branch: phi = pi/2 - delta with delta small. Solve the
        // well-conditioned form h(delta) = (pi/2 - delta) cos(delta)
        // - T sin(delta), which is strictly decreasing on (0, pi/2).
        let h = |d: f64| (FRAC_PI_2 - d) * d.cos() - t * d.sin();
        let (mut lo, mut hi) = (1e-30, 1.0);
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if h(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut d = 0.5 * (lo + hi);
        for _ in 0..6 {
            let hp = -d.cos() * (1.0 + t) - (FRAC_PI_2 - d) * d.sin();
            let step = h(d) / hp;
            d -= step;
            if step.abs() < 1e-18 * d {
                break;
            }
        }
        FRAC_PI_2 - d
    } else {
        let r = |p: f64| p * p.tan() - t;
        let (mut lo, mut hi) = (1e-18, FRAC_PI_2 * (1.0 - 1e-12));
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            if r(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    // Newton on the residual itself; keep the best iterate seen.
    let mut best = phi;
    let mut best_r = (phi * phi.tan() - t).abs();
    for _ in 0..12 {
        let tan = phi.tan();
        let r = phi * tan - t;
        if r.abs() < best_r {
            best_r = r.abs();
            best = phi;
        }
        let dr = tan + phi * (1.0 + tan * tan);
        let next = (phi - r / dr).clamp(1e-300, FRAC_PI_2 * (1.0 - 1e-16));
        if next == phi {
            break;
        }
        phi = next;
    }
    if best_r > tol {
        return Err(FrontError::NoConvergence(format!(
            "phi* residual {best_r:.3e} above tolerance {tol:.3e} at epsilon {epsilon:.3e}"
        )));
    }
    Ok(best)
}

/// Exact selected speed of the cutoff linear problem, with companions.
pub fn linear_front_speed(epsilon: f64) -> Result<SpeedReport> {
    let phi_star = solve_phi_star(epsilon, 1e-12)?;
    let s = phi_star.sin();
    Ok(SpeedReport {
        epsilon,
        phi_star,
        c_l: 2.0 * s,
        c_bd: brunet_derrida_speed(epsilon)?,
        c_kpp: 2.0,
        c_zfk: zfk_linear_speed(epsilon)?,
        m: 2.0 * s * s,
        m_zfk_bound: zfk_functional_bound(epsilon)?,
    })
}

/// Leading cutoff correction to the pulled speed: 2 - pi^2 / log^2(epsilon).
pub fn brunet_derrida_speed(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let l = epsilon.ln();
    Ok(2.0 - PI * PI / (l * l))
}

/// ZFK integral speed sqrt(2 F(1)) of the cutoff linear profile: with
/// F(1) = (1 - eps^2)/2 this is sqrt(1 - eps^2).
pub fn zfk_linear_speed(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    Ok((1.0 - epsilon * epsilon).sqrt())
}

/// Variational level M = sup G = 2 sin^2(phi*) = c_l^2 / 2.
pub fn variational_mass(epsilon: f64) -> Result<f64> {
    let phi = solve_phi_star(epsilon, 1e-12)?;
    let s = phi.sin();
    Ok(2.0 * s * s)
}

/// Elementary upper bound for the functional: 2 (1 - e^2) / (1 + e^2)^2.
pub fn zfk_functional_bound(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let e2 = epsilon * epsilon;
    Ok(2.0 * (1.0 - e2) / ((1.0 + e2) * (1.0 + e2)))
}

/// (2 - c_l) log^2(epsilon) / pi^2: tends to 1 from below as epsilon -> 0.
pub fn bd_ratio(epsilon: f64) -> Result<f64> {
    let report = linear_front_speed(epsilon)?;
    let l = epsilon.ln();
    Ok((2.0 - report.c_l) * l * l / (PI * PI))
}

/// Speed reports on an inclusive grid of cutoff values.
pub fn sweep(start: f64, end: f64, points: usize, spacing: Spacing) -> Result<Vec<SpeedReport>> {
    check_epsilon(start)?;
    check_epsilon(end)?;
    if start >= end {
        return Err(FrontError::ParameterOutOfRange(format!(
            "sweep needs start < end, got [{start}, {end}]"
        )));
    }
    if points < 2 {
        return Err(FrontError::ParameterOutOfRange(format!(
            "sweep needs at least 2 points, got {points}"
        )));
    }
    let mut out = Vec::with_capacity(points);
    for i in 0..points {
        // Endpoints are pinned exactly; exp(ln x) round-trips an ulp off.
        let eps = if i == 0 {
            start
        } else if i == points - 1 {
            end
        } else {
            let w = i as f64 / (points - 1) as f64;
            match spacing {
                Spacing::Log => (start.ln() + w * (end.ln() - start.ln())).exp(),
                Spacing::Linear => start + w * (end - start),
            }
        };
        out.push(linear_front_speed(eps.clamp(start, end))?);
    }
    Ok(out)
}
