//! Variational functionals over monotone trial profiles u(s).
//!
//! A trial is the identity ramp on [0, eps] (pinned by convention, so that
//! segment never appears in the sample grid), piecewise linear on the grid
//! covering [eps, s0], and frozen at 1 beyond s0. The quadratic functional
//! G has value sup_u G = M = c_L^2 / 2 at the closed-form maximizer; the
//! reaction-weighted functional F generalizes it to nonlinear profiles and
//! satisfies F = 2 G when the profile is linear.

use crate::error::{FrontError, Result};
use crate::maximizer::MaximizerParams;
use crate::profiles::CutoffProfile;
use crate::quad;

const GRID_MATCH_TOL: f64 = 1e-9;
const QUAD_REL_TOL: f64 = 1e-11;

/// Log-spaced grid with exact endpoints.
pub fn geomspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if !(a.is_finite() && b.is_finite() && a > 0.0 && b > a) {
        return Err(FrontError::ParameterOutOfRange(format!(
            "geomspace needs 0 < a < b, got [{a}, {b}]"
        )));
    }
    if n < 2 {
        return Err(FrontError::ParameterOutOfRange(format!(
            "geomspace needs at least 2 points, got {n}"
        )));
    }
    let (la, lb) = (a.ln(), b.ln());
    let mut grid: Vec<f64> = (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect();
    grid[0] = a;
    grid[n - 1] = b;
    Ok(grid)
}

#[derive(Debug, Clone)]
pub struct TrialFunction {
    s: Vec<f64>,
    u: Vec<f64>,
    s0: f64,
    analytic: Option<MaximizerParams>,
}

impl TrialFunction {
    pub fn new(s: Vec<f64>, u: Vec<f64>, s0: f64) -> Result<Self> {
        if s.len() != u.len() || s.len() < 2 {
            return Err(FrontError::ParameterOutOfRange(format!(
                "trial needs matching grids with at least 2 nodes, got {} and {}",
                s.len(),
                u.len()
            )));
        }
        if s.iter().chain(u.iter()).any(|v| !v.is_finite()) {
            return Err(FrontError::ParameterOutOfRange(
                "trial contains non-finite values".into(),
            ));
        }
        if s[0] <= 0.0 {
            return Err(FrontError::ParameterOutOfRange(format!(
                "trial grid must be positive, starts at {}",
                s[0]
            )));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FrontError::ParameterOutOfRange(
                "trial grid must be strictly increasing".into(),
            ));
        }
        if !(s0.is_finite() && s0 > 0.0) || s[s.len() - 1] > s0 * (1.0 + GRID_MATCH_TOL) {
            return Err(FrontError::ParameterOutOfRange(format!(
                "trial grid must end at or before s0 = {s0}"
            )));
        }
        Ok(TrialFunction { s, u, s0, analytic: None })
    }

    /// Tag the trial with closed-form parameters so functionals can use
    /// adaptive quadrature on the exact profile instead of the samples.
    pub fn with_analytic(mut self, params: MaximizerParams) -> Self {
        self.analytic = Some(params);
        self
    }

    pub fn s_grid(&self) -> &[f64] {
        &self.s
    }

    pub fn u_values(&self) -> &[f64] {
        &self.u
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn analytic(&self) -> Option<&MaximizerParams> {
        self.analytic.as_ref()
    }

    /// Shared contract of both functionals: grid starts at the cutoff, ends
    /// at s0 with u saturated, and u is a nondecreasing map into [0, 1].
    pub fn check_feasible(&self, epsilon: f64) -> Result<()> {
        crate::error::check_epsilon(epsilon)?;
        let n = self.s.len();
        if (self.s[0] - epsilon).abs() > GRID_MATCH_TOL * epsilon.max(1e-12) {
            return Err(FrontError::ParameterOutOfRange(format!(
                "trial grid must start at the cutoff {epsilon}, starts at {}",
                self.s[0]
            )));
        }
        if (self.s[n - 1] - self.s0).abs() > GRID_MATCH_TOL * self.s0 {
            return Err(FrontError::ParameterOutOfRange(format!(
                "trial grid must end at s0 = {}, ends at {}",
                self.s0,
                self.s[n - 1]
            )));
        }
        if (self.u[n - 1] - 1.0).abs() > GRID_MATCH_TOL {
            return Err(FrontError::ParameterOutOfRange(format!(
                "trial must saturate at 1 at s0, ends at {}",
                self.u[n - 1]
            )));
        }
        for w in self.u.windows(2) {
            if w[1] < w[0] - 1e-12 {
                return Err(FrontError::NonMonotoneTrial(format!(
                    "u drops from {} to {}",
                    w[0], w[1]
                )));
            }
        }
        for &v in &self.u {
            if !(-1e-12..=1.0 + GRID_MATCH_TOL).contains(&v) {
                return Err(FrontError::ParameterOutOfRange(format!(
                    "trial value {v} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FunctionalValue {
    pub numerator: f64,
    pub denominator: f64,
    pub value: f64,
}

/// Exact integrals of the piecewise-linear trial: numerator core
/// int [u^2 - eps^2]_+ / s^2 ds and derivative energy int u'^2 ds.
/// Panels where u crosses the cutoff are split at the crossing.
pub(crate) fn discrete_core(s: &[f64], u: &[f64], epsilon: f64) -> (f64, f64) {
    let e2 = epsilon * epsilon;
    let mut num = 0.0;
    let mut energy = 0.0;
    for i in 0..s.len() - 1 {
        let ds = s[i + 1] - s[i];
        let b = (u[i + 1] - u[i]) / ds;
        energy += b * b * ds;
        let (lo, hi) = if u[i] >= epsilon {
            (s[i], s[i + 1])
        } else if u[i + 1] <= epsilon {
            continue;
        } else {
            // Single crossing: u is linear and rises through the cutoff.
            let a = u[i] - b * s[i];
            ((epsilon - a) / b, s[i + 1])
        };
        let a = u[i] - b * s[i];
        let inv = 1.0 / lo - 1.0 / hi;
        num += (a * a - e2) * inv + 2.0 * a * b * (hi / lo).ln() + b * b * (hi - lo);
    }
    (num, energy)
}

/// The quadratic functional G(u) = (1/2) [int [u^2-eps^2]_+/s^2 + (1-eps^2)/s0]
/// / [eps + int u'^2].
///
/// Analytic trials integrate the closed form adaptively in log s; sampled
/// trials use the exact piecewise-linear panel integrals.
pub fn eval_g(trial: &TrialFunction, epsilon: f64) -> Result<FunctionalValue> {
    trial.check_feasible(epsilon)?;
    let e2 = epsilon * epsilon;
    let tail = (1.0 - e2) / trial.s0();
    let (core, energy) = match trial.analytic() {
        Some(params) => {
            let p = *params;
            let num_f = move |t: f64| {
                let s = t.exp();
                let (u, _) = p.eval(s);
                (u * u - e2).max(0.0) / s
            };
            let den_f = move |t: f64| {
                let s = t.exp();
                let (_, du) = p.eval(s);
                du * du * s
            };
            let (a, b) = (epsilon.ln(), trial.s0().ln());
            let num = quad::adaptive(&num_f, a, b, QUAD_REL_TOL, 0.0);
            let den = quad::adaptive(&den_f, a, b, QUAD_REL_TOL, 0.0);
            match (num, den) {
                (Ok(n), Ok(d)) => (n, d),
                _ => {
                    return Err(FrontError::GridTooCoarse(
                        "adaptive quadrature failed on the analytic trial".into(),
                    ))
                }
            }
        }
        None => discrete_core(trial.s_grid(), trial.u_values(), epsilon),
    };
    let numerator = core + tail;
    let denominator = epsilon + energy;
    Ok(FunctionalValue {
        numerator,
        denominator,
        value: 0.5 * numerator / denominator,
    })
}

/// Reaction-weighted functional F(u) = 2 [F(1)/s0 + int F(u)/s^2] / [eps +
/// int u'^2], where F is the profile's reaction integral. Coincides with
/// 2 G for the linear profile.
pub fn eval_f(trial: &TrialFunction, profile: &CutoffProfile, s0: f64) -> Result<FunctionalValue> {
    let epsilon = profile.epsilon();
    trial.check_feasible(epsilon)?;
    if (s0 - trial.s0()).abs() > GRID_MATCH_TOL * trial.s0() {
        return Err(FrontError::ParameterOutOfRange(format!(
            "saturation radius {s0} does not match the trial's {}",
            trial.s0()
        )));
    }
    let f1 = profile.reaction_integral(1.0)?;
    let tail = f1 / s0;
    let (core, energy) = match trial.analytic() {
        Some(params) => {
            let p = *params;
            let num_f = |t: f64| {
                let s = t.exp();
                let (u, _) = p.eval(s);
                profile.reaction_integral(u.clamp(0.0, 1.0)).unwrap_or(0.0) / s
            };
            let den_f = move |t: f64| {
                let s = t.exp();
                let (_, du) = p.eval(s);
                du * du * s
            };
            let (a, b) = (epsilon.ln(), s0.ln());
            let num = quad::adaptive(&num_f, a, b, QUAD_REL_TOL, 0.0);
            let den = quad::adaptive(&den_f, a, b, QUAD_REL_TOL, 0.0);
            match (num, den) {
                (Ok(n), Ok(d)) => (n, d),
                _ => {
                    return Err(FrontError::GridTooCoarse(
                        "adaptive quadrature failed on the analytic trial".into(),
                    ))
                }
            }
        }
        None => {
            let (s, u) = (trial.s_grid(), trial.u_values());
            let mut core = 0.0;
            let mut energy = 0.0;
            for i in 0..s.len() - 1 {
                let ds = s[i + 1] - s[i];
                let b = (u[i + 1] - u[i]) / ds;
                energy += b * b * ds;
                let a = u[i] - b * s[i];
                // u is linear on the panel, so integrate F(a + b q)/q^2 by
                // one Gauss-Kronrod panel; F is smooth between cutoffs.
                let (v, _) = quad::gk15(
                    &|q: f64| {
                        let val = (a + b * q).clamp(0.0, 1.0);
                        profile.reaction_integral(val).unwrap_or(0.0) / (q * q)
                    },
                    s[i],
                    s[i + 1],
                );
                core += v;
            }
            (core, energy)
        }
    };
    let numerator = core + tail;
    let denominator = epsilon + energy;
    Ok(FunctionalValue {
        numerator,
        denominator,
        value: 2.0 * numerator / denominator,
    })
}

/// ZFK trial speed sqrt(2 F(1)) of a profile.
pub fn zfk_speed(profile: &CutoffProfile) -> Result<f64> {
    Ok((2.0 * profile.reaction_integral(1.0)?).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maximizer::build_maximizer;
    use crate::profiles::Family;
    use crate::speed_core::variational_mass;

    fn ramp_trial() -> TrialFunction {
        // u(s) = s on [0.5, 1], saturating at s0 = 1 with eps = 0.5.
        let s: Vec<f64> = (0..=50).map(|i| 0.5 + 0.01 * i as f64).collect();
        let u = s.clone();
        TrialFunction::new(s, u, 1.0).unwrap()
    }

    #[test]
    fn ramp_value_is_exact() {
        // Numerator: int_{1/2}^{1} (s^2 - 1/4)/s^2 + (3/4)/1 = 1/4 + 3/4 = 1.
        // Denominator: 1/2 + int 1 = 1. Value = 1/2.
        let g = eval_g(&ramp_trial(), 0.5).unwrap();
        assert!((g.numerator - 1.0).abs() < 1e-12, "num {}", g.numerator);
        assert!((g.denominator - 1.0).abs() < 1e-12, "den {}", g.denominator);
        assert!((g.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn analytic_maximizer_attains_the_mass() {
        for &eps in &[(-std::f64::consts::FRAC_PI_2).exp(), 0.1, 0.05, 1e-4] {
            let (_, trial) = build_maximizer(eps).unwrap();
            let g = eval_g(&trial, eps).unwrap();
            let m = variational_mass(eps).unwrap();
            assert!(
                ((g.value - m) / m).abs() < 1e-9,
                "G(uhat) at eps={eps}: {} vs {m}",
                g.value
            );
        }
    }

    #[test]
    fn sampled_maximizer_approaches_from_below() {
        let eps = 0.1;
        let (_, trial) = build_maximizer(eps).unwrap();
        let sampled = TrialFunction::new(
            trial.s_grid().to_vec(),
            trial.u_values().to_vec(),
            trial.s0(),
        )
        .unwrap();
        let g = eval_g(&sampled, eps).unwrap();
        let m = variational_mass(eps).unwrap();
        assert!(g.value <= m + 1e-12, "discrete value above the mass");
        assert!((m - g.value) / m < 2e-6, "relgap {}", (m - g.value) / m);
    }

    #[test]
    fn f_equals_twice_g_for_linear_profile() {
        let profile = CutoffProfile::new(0.5, Family::Linear).unwrap();
        let trial = ramp_trial();
        let f = eval_f(&trial, &profile, 1.0).unwrap();
        let g = eval_g(&trial, 0.5).unwrap();
        assert!((f.value - 2.0 * g.value).abs() < 1e-10, "{} vs {}", f.value, 2.0 * g.value);

        let eps = 0.1;
        let profile = CutoffProfile::new(eps, Family::Linear).unwrap();
        let (_, mx) = build_maximizer(eps).unwrap();
        let f = eval_f(&mx, &profile, mx.s0()).unwrap();
        let g = eval_g(&mx, eps).unwrap();
        assert!(((f.value - 2.0 * g.value) / f.value).abs() < 1e-8);
    }

    #[test]
    fn nonlinear_profile_lowers_f_by_the_gap() {
        // F(uhat) = c_L^2 - gap with gap = 2 int N(uhat) uhat'/s ds / D.
        let eps = 0.1;
        let profile = CutoffProfile::new(eps, Family::Fisher).unwrap();
        let (_, trial) = build_maximizer(eps).unwrap();
        let f = eval_f(&trial, &profile, trial.s0()).unwrap();
        let c_l2 = 2.0 * variational_mass(eps).unwrap();
        let expect = c_l2 - 1.038710884;
        assert!((f.value - expect).abs() < 1e-7, "{} vs {expect}", f.value);
        assert!(f.value < c_l2);
    }

    #[test]
    fn zfk_speed_of_cubic() {
        let profile = CutoffProfile::new(0.1, Family::BdCubic).unwrap();
        assert!((zfk_speed(&profile).unwrap() - 0.700035713374682).abs() < 1e-12);
    }

    #[test]
    fn feasibility_gates() {
        // Non-monotone.
        let s = vec![0.5, 0.7, 0.9, 1.0];
        let u = vec![0.5, 0.8, 0.7, 1.0];
        let t = TrialFunction::new(s.clone(), u, 1.0).unwrap();
        assert!(matches!(
            eval_g(&t, 0.5),
            Err(FrontError::NonMonotoneTrial(_))
        ));
        // Out of range.
        let t = TrialFunction::new(s.clone(), vec![0.5, 0.8, 1.2, 1.0], 1.0);
        assert!(t.is_ok());
        assert!(eval_g(&t.unwrap(), 0.5).is_err());
        // Grid does not start at the cutoff.
        let t = TrialFunction::new(s.clone(), vec![0.5, 0.7, 0.9, 1.0], 1.0).unwrap();
        assert!(eval_g(&t, 0.3).is_err());
        // Not saturated at s0.
        let t = TrialFunction::new(s, vec![0.5, 0.6, 0.7, 0.8], 1.0).unwrap();
        assert!(eval_g(&t, 0.5).is_err());
    }

    #[test]
    fn trial_structure_gates() {
        assert!(TrialFunction::new(vec![0.5], vec![0.5], 1.0).is_err());
        assert!(TrialFunction::new(vec![0.5, 0.4], vec![0.5, 1.0], 1.0).is_err());
        assert!(TrialFunction::new(vec![0.0, 0.5], vec![0.0, 1.0], 1.0).is_err());
        assert!(TrialFunction::new(vec![0.5, 2.0], vec![0.5, 1.0], 1.0).is_err());
        assert!(TrialFunction::new(vec![0.5, 1.0], vec![0.5, f64::NAN], 1.0).is_err());
    }

    #[test]
    fn numerator_respects_coarse_bound() {
        // num <= (1 - eps^2)/eps: u <= 1 everywhere makes the integrand at
        // most (1 - eps^2)/s^2.
        for &eps in &[0.05, 0.1, 0.5] {
            let (_, trial) = build_maximizer(eps).unwrap();
            let g = eval_g(&trial, eps).unwrap();
            assert!(g.numerator <= (1.0 - eps * eps) / eps * (1.0 + 1e-9));
            assert!(g.denominator >= eps);
        }
    }

    #[test]
    fn s0_mismatch_rejected() {
        let profile = CutoffProfile::new(0.5, Family::Linear).unwrap();
        let trial = ramp_trial();
        assert!(eval_f(&trial, &profile, 2.0).is_err());
    }

    #[test]
    fn geomspace_shape() {
        let g = geomspace(1e-2, 1e2, 5).unwrap();
        assert_eq!(g[0], 1e-2);
        assert_eq!(g[4], 1e2);
        assert!((g[2] - 1.0).abs() < 1e-14);
        assert!(geomspace(0.0, 1.0, 5).is_err());
        assert!(geomspace(1.0, 0.5, 5).is_err());
        assert!(geomspace(1.0, 2.0, 1).is_err());
    }
}
