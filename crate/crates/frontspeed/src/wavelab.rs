//! Independent speed oracles: phase-plane shooting for the traveling wave
//! and a semi-implicit PDE front tracker.

use crate::error::{FrontError, Result};
use crate::profiles::CutoffProfile;
use crate::tridiag;

/// Distance below u = 1 where integration departs along the local solution.
const DEPART_OFFSET: f64 = 1e-6;
/// Shooting bracket: KPP speeds live below 2; the margin catches overshoot.
const BRACKET: (f64, f64) = (1e-3, 2.2);
const SHOOT_RTOL: f64 = 1e-10;
const SHOOT_ATOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    pub l: f64,
    pub h: f64,
    pub dt: f64,
    pub t_final: f64,
    pub ic_front_pos: f64,
    /// Fraction of [0, T] (taken from the end) used for the speed fit.
    pub fit_window: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            l: 400.0,
            h: 0.1,
            dt: 0.05,
            t_final: 150.0,
            ic_front_pos: 50.0,
            fit_window: 0.5,
        }
    }
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("L", self.l),
            ("h", self.h),
            ("dt", self.dt),
            ("T", self.t_final),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(FrontError::ParameterOutOfRange(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.dt > self.h * (1.0 + 1e-12) {
            return Err(FrontError::ParameterOutOfRange(format!(
                "need dt <= h for the semi-implicit scheme, got dt={} h={}",
                self.dt, self.h
            )));
        }
        if !(self.ic_front_pos > 0.0 && self.ic_front_pos < self.l - 20.0) {
            return Err(FrontError::ParameterOutOfRange(format!(
                "initial front at {} must sit inside (0, L - 20)",
                self.ic_front_pos
            )));
        }
        if !(self.fit_window > 0.0 && self.fit_window <= 1.0) {
            return Err(FrontError::ParameterOutOfRange(format!(
                "fit window must lie in (0, 1], got {}",
                self.fit_window
            )));
        }
        if self.l / self.h > 1e7 {
            return Err(FrontError::ParameterOutOfRange(
                "grid exceeds 10^7 nodes".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct FrontSimResult {
    pub times: Vec<f64>,
    pub front_positions: Vec<f64>,
    pub fitted_speed: f64,
    pub fit_residual: f64,
    /// Cross-check speed from the shooting method, when a caller ran it.
    pub shoot_speed: Option<f64>,
}

/// Traveling-wave speed by shooting in the phase plane.
///
/// With p = -du/dxi > 0 the wave obeys p dp/du = c p - f(u). Integration
/// runs from the departure expansion at u = 1 down to the cutoff, where
/// f = 0 makes the tail exactly u ~ e^{-c xi}, i.e. p(eps) = c eps. The
/// mismatch S(c) = p_c(eps) - c eps decreases in c; bisection finds its
/// root.
pub fn shoot_wave_speed(profile: &CutoffProfile, tol: f64) -> Result<f64> {
    if !(tol.is_finite() && (1e-12..0.1).contains(&tol)) {
        return Err(FrontError::ParameterOutOfRange(format!(
            "shooting tolerance must lie in [1e-12, 0.1), got {tol}"
        )));
    }
    let (mut lo, mut hi) = BRACKET;
    let s_lo = shoot_mismatch(profile, lo)?;
    let s_hi = shoot_mismatch(profile, hi)?;
    if !(s_lo > 0.0 && s_hi < 0.0) {
        return Err(FrontError::NoSignChange(format!(
            "S({lo}) = {s_lo:.3e}, S({hi}) = {s_hi:.3e}; no root in the bracket"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if shoot_mismatch(profile, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Tail mismatch p_c(eps) - c eps; -inf encodes a trajectory that crashed
/// into p = 0 before reaching the cutoff (possible only above the true
/// speed, so it counts as overshoot).
fn shoot_mismatch(profile: &CutoffProfile, c: f64) -> Result<f64> {
    let epsilon = profile.epsilon();
    let u_start = 1.0 - DEPART_OFFSET;
    let k = profile.reaction_limit_at_one();
    let p_start = if k > 1e-8 {
        // f(1-) > 0: p^2 = 2k(1-u) to leading order, with the c-dependent
        // first correction.
        (2.0 * k * DEPART_OFFSET).sqrt() - (2.0 * c / 3.0) * DEPART_OFFSET
    } else {
        // Saddle at u = 1: depart along the unstable direction p = lambda q.
        let slope = profile.reaction_slope_at_one();
        let disc = c * c - 4.0 * slope;
        if disc < 0.0 {
            return Err(FrontError::StiffIntegration(format!(
                "complex departure eigenvalue at c = {c}"
            )));
        }
        0.5 * (-c + disc.sqrt()) * DEPART_OFFSET
    };
    let rhs = |u: f64, p: f64| c - profile.reaction(u) / p.max(1e-300);
    match integrate_cash_karp(&rhs, u_start, p_start, epsilon)? {
        Some(p_end) => Ok(p_end - c * epsilon),
        None => Ok(f64::NEG_INFINITY),
    }
}

/// Adaptive Cash–Karp RK45 for a scalar ODE p' = f(u, p), integrating from
/// u0 to u1 (either direction). Returns None if p falls to the floor.
fn integrate_cash_karp<F: Fn(f64, f64) -> f64>(
    f: &F,
    u0: f64,
    p0: f64,
    u1: f64,
) -> Result<Option<f64>> {
    let span = u1 - u0;
    let mut u = u0;
    let mut p = p0;
    let mut h = span * 1e-6;
    let h_min = span.abs() * 1e-15;
    let mut steps = 0usize;
    while (u1 - u) * span.signum() > 0.0 {
        steps += 1;
        if steps > 2_000_000 {
            return Err(FrontError::StiffIntegration(format!(
                "step budget exhausted at u = {u}"
            )));
        }
        if p <= 1e-14 {
            return Ok(None);
        }
        let remaining = u1 - u;
        if remaining.abs() <= h_min {
            // Below fp resolution of the span the tail cannot move p.
            u = u1;
            continue;
        }
        let mut arrives = false;
        if (u + h - u1) * span.signum() > 0.0 {
            h = remaining;
            arrives = true;
        }
        let k1 = f(u, p);
        let k2 = f(u + 0.2 * h, p + h * 0.2 * k1);
        let k3 = f(u + 0.3 * h, p + h * (0.075 * k1 + 0.225 * k2));
        let k4 = f(u + 0.6 * h, p + h * (0.3 * k1 - 0.9 * k2 + 1.2 * k3));
        let k5 = f(
            u + h,
            p + h * ((-11.0 / 54.0) * k1 + 2.5 * k2 + (-70.0 / 27.0) * k3 + (35.0 / 27.0) * k4),
        );
        let k6 = f(
            u + 0.875 * h,
            p + h
                * ((1631.0 / 55296.0) * k1
                    + (175.0 / 512.0) * k2
                    + (575.0 / 13824.0) * k3
                    + (44275.0 / 110592.0) * k4
                    + (253.0 / 4096.0) * k5),
        );
        let p5 = p
            + h * ((37.0 / 378.0) * k1
                + (250.0 / 621.0) * k3
                + (125.0 / 594.0) * k4
                + (512.0 / 1771.0) * k6);
        let p4 = p
            + h * ((2825.0 / 27648.0) * k1
                + (18575.0 / 48384.0) * k3
                + (13525.0 / 55296.0) * k4
                + (277.0 / 14336.0) * k5
                + 0.25 * k6);
        let err = (p5 - p4).abs();
        let scale = SHOOT_ATOL + SHOOT_RTOL * p.abs().max(p5.abs());
        let ratio = err / scale;
        if ratio <= 1.0 && p5.is_finite() {
            u = if arrives { u1 } else { u + h };
            p = p5;
            let grow = if ratio > 0.0 { 0.9 * ratio.powf(-0.2) } else { 5.0 };
            h *= grow.clamp(0.2, 5.0);
        } else {
            let shrink = if ratio.is_finite() && ratio > 0.0 {
                (0.9 * ratio.powf(-0.25)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            h *= shrink;
            // Only a rejected step may drive h to the floor; accepted steps
            // never shrink it below 0.9x.
            if h.abs() < h_min {
                return Err(FrontError::StiffIntegration(format!(
                    "step collapsed at u = {u}"
                )));
            }
        }
    }
    Ok(Some(p))
}

/// Semi-implicit front simulation: explicit (capped) reaction, implicit
/// diffusion via one tridiagonal solve per step, Dirichlet u=1 left and
/// u=0 right, step initial data.
pub fn simulate_front(profile: &CutoffProfile, config: &SimConfig) -> Result<FrontSimResult> {
    config.validate()?;
    let m = (config.l / config.h).round() as usize;
    let h = config.l / m as f64;
    let n_steps = (config.t_final / config.dt).round() as usize;
    let r = config.dt / (h * h);

    let mut u: Vec<f64> = (0..=m)
        .map(|i| if i as f64 * h <= config.ic_front_pos { 1.0 } else { 0.0 })
        .collect();

    // Interior system (I - dt D2): constant coefficients.
    let n_int = m - 1;
    let sub = vec![-r; n_int - 1];
    let sup = vec![-r; n_int - 1];
    let diag = vec![1.0 + 2.0 * r; n_int];
    let mut rhs = vec![0.0; n_int];

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut fronts = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    fronts.push(front_position(&u, h).ok_or(FrontError::FrontHitBoundary)?);

    for step in 1..=n_steps {
        for i in 1..m {
            let mid = (u[i] + config.dt * profile.reaction(u[i])).min(1.0);
            rhs[i - 1] = mid;
        }
        // Dirichlet contributions.
        rhs[0] += r * 1.0;
        let interior = tridiag::solve(&sub, &diag, &sup, &rhs)?;
        u[1..m].copy_from_slice(&interior);

        let t = step as f64 * config.dt;
        let xf = front_position(&u, h).ok_or(FrontError::FrontHitBoundary)?;
        if !xf.is_finite() || u.iter().any(|v| !v.is_finite()) {
            return Err(FrontError::UnstableStep(format!("at t = {t}")));
        }
        if u.iter().any(|&v| !(-1e-9..=1.0 + 1e-9).contains(&v)) {
            return Err(FrontError::UnstableStep(format!(
                "solution left [0, 1] at t = {t}"
            )));
        }
        if xf > config.l - 20.0 {
            return Err(FrontError::FrontHitBoundary);
        }
        times.push(t);
        fronts.push(xf);
    }

    let (fitted_speed, fit_residual) = fit_speed(&times, &fronts, config.fit_window)?;
    Ok(FrontSimResult {
        times,
        front_positions: fronts,
        fitted_speed,
        fit_residual,
        shoot_speed: None,
    })
}

/// Rightmost u = 1/2 crossing, linearly interpolated.
fn front_position(u: &[f64], h: f64) -> Option<f64> {
    for i in (0..u.len() - 1).rev() {
        if u[i] >= 0.5 {
            let frac = (u[i] - 0.5) / (u[i] - u[i + 1]).max(1e-300);
            return Some(h * (i as f64 + frac.min(1.0)));
        }
    }
    None
}

/// OLS slope and max-abs residual over the trailing `window` fraction.
pub fn fit_speed(times: &[f64], positions: &[f64], window: f64) -> Result<(f64, f64)> {
    if !(window > 0.0 && window <= 1.0) {
        return Err(FrontError::ParameterOutOfRange(format!(
            "fit window must lie in (0, 1], got {window}"
        )));
    }
    if times.len() != positions.len() {
        return Err(FrontError::ParameterOutOfRange(
            "times and positions must have the same length".into(),
        ));
    }
    if positions.iter().any(|v| !v.is_finite()) {
        return Err(FrontError::ParameterOutOfRange(
            "positions must be finite".into(),
        ));
    }
    let t_end = *times.last().unwrap_or(&0.0);
    let t_cut = t_end * (1.0 - window) - 1e-12;
    let idx: Vec<usize> = (0..times.len()).filter(|&i| times[i] >= t_cut).collect();
    if idx.len() < 10 {
        return Err(FrontError::TooFewSamples {
            have: idx.len(),
            need: 10,
        });
    }
    let n = idx.len() as f64;
    let mean_t = idx.iter().map(|&i| times[i]).sum::<f64>() / n;
    let mean_x = idx.iter().map(|&i| positions[i]).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for &i in &idx {
        cov += (times[i] - mean_t) * (positions[i] - mean_x);
        var += (times[i] - mean_t) * (times[i] - mean_t);
    }
    if var == 0.0 {
        return Err(FrontError::ParameterOutOfRange(
            "fit window has no time extent".into(),
        ));
    }
    let slope = cov / var;
    let intercept = mean_x - slope * mean_t;
    let residual = idx
        .iter()
        .map(|&i| (positions[i] - intercept - slope * times[i]).abs())
        .fold(0.0f64, f64::max);
    Ok((slope, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::Family;
    use crate::speed_core::linear_front_speed;

    #[test]
    fn fit_recovers_exact_line() {
        let times: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let xs: Vec<f64> = times.iter().map(|t| 3.0 + 1.5 * t).collect();
        let (v, res) = fit_speed(&times, &xs, 0.5).unwrap();
        assert!((v - 1.5).abs() < 1e-12);
        assert!(res < 1e-10);

        let flat = vec![7.0; 40];
        let (v, _) = fit_speed(&times, &flat, 1.0).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn fit_residual_sees_outliers() {
        let times: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let mut xs: Vec<f64> = times.iter().map(|t| 3.0 + 1.5 * t).collect();
        xs[30] += 4.0;
        let (_, res) = fit_speed(&times, &xs, 1.0).unwrap();
        assert!(res > 3.0 && res < 4.1, "residual {res}");
    }

    #[test]
    fn fit_gates() {
        let t: Vec<f64> = (0..5).map(|i| i as f64).collect();
        let x = vec![0.0; 5];
        assert!(matches!(
            fit_speed(&t, &x, 1.0),
            Err(FrontError::TooFewSamples { .. })
        ));
        let t: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let x = vec![0.0; 40];
        assert!(fit_speed(&t, &x, 0.0).is_err());
        assert!(fit_speed(&t, &x[..30], 1.0).is_err());
    }

    #[test]
    fn shooting_matches_closed_form_for_linear() {
        for &eps in &[0.05, (-std::f64::consts::FRAC_PI_2).exp()] {
            let profile = CutoffProfile::new(eps, Family::Linear).unwrap();
            let c = shoot_wave_speed(&profile, 1e-10).unwrap();
            let c_l = linear_front_speed(eps).unwrap().c_l;
            assert!((c - c_l).abs() < 1e-6, "eps={eps}: {c} vs {c_l}");
        }
    }

    #[test]
    fn shooting_golden_speeds() {
        let cases: [(Family, f64, f64); 6] = [
            (Family::Fisher, 0.05, 1.4151679080),
            (Family::Fisher, 0.1, 1.2519411731),
            (Family::BdCubic, 0.05, 1.5534871634),
            (Family::BdCubic, 0.1, 1.4152749806),
            (Family::Power { b: 1.0, eta: 1.0 }, 0.05, 1.4892940952),
            (Family::Power { b: 1.0, eta: 1.0 }, 0.01, 1.6642430997),
        ];
        for (family, eps, golden) in cases {
            let profile = CutoffProfile::new(eps, family).unwrap();
            let c = shoot_wave_speed(&profile, 1e-10).unwrap();
            assert!((c - golden).abs() < 1e-6, "eps={eps}: {c} vs {golden}");
            let c_l = linear_front_speed(eps).unwrap().c_l;
            assert!(c <= c_l + 1e-4, "speed above the linear bound");
        }
    }

    #[test]
    fn shoot_tolerance_gate() {
        let profile = CutoffProfile::new(0.1, Family::Linear).unwrap();
        assert!(shoot_wave_speed(&profile, 0.0).is_err());
        assert!(shoot_wave_speed(&profile, 0.5).is_err());
    }

    #[test]
    fn pde_front_speed_linear() {
        let profile = CutoffProfile::new(0.05, Family::Linear).unwrap();
        let r = simulate_front(&profile, &SimConfig::default()).unwrap();
        // Frozen desk-scale value; about 1.6% under the exact speed.
        assert!((r.fitted_speed - 1.643076).abs() < 1e-3, "{}", r.fitted_speed);
        let c_l = linear_front_speed(0.05).unwrap().c_l;
        assert!((r.fitted_speed - c_l).abs() / c_l < 0.03);
        assert!(r.fit_residual < 0.5, "residual {}", r.fit_residual);
        // After the transient the front only moves forward.
        let half = r.times.len() / 2;
        for w in r.front_positions[half..].windows(2) {
            assert!(w[1] >= w[0] - 1e-9);
        }
        assert!(r.shoot_speed.is_none());
    }

    #[test]
    fn pde_front_hits_boundary() {
        let cfg = SimConfig {
            l: 100.0,
            ic_front_pos: 70.0,
            ..Default::default()
        };
        let profile = CutoffProfile::new(0.05, Family::Linear).unwrap();
        assert!(matches!(
            simulate_front(&profile, &cfg),
            Err(FrontError::FrontHitBoundary)
        ));
    }

    #[test]
    fn sim_config_gates() {
        let profile = CutoffProfile::new(0.05, Family::Linear).unwrap();
        let bad = [
            SimConfig { dt: 0.2, ..Default::default() },
            SimConfig { l: -1.0, ..Default::default() },
            SimConfig { ic_front_pos: 395.0, ..Default::default() },
            SimConfig { fit_window: 0.0, ..Default::default() },
            SimConfig { fit_window: 1.5, ..Default::default() },
        ];
        for cfg in bad {
            assert!(simulate_front(&profile, &cfg).is_err());
        }
    }
}
