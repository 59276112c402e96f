//! Rigorous two-sided speed brackets.
//!
//! Evaluating the reaction-weighted functional at the closed-form maximizer
//! gives c^2 >= c_L^2 - gap with gap = 2 * int N(uhat) uhat'/s ds / D, where
//! D is the maximizer's full denominator. Together with the upper bound
//! c <= c_L this brackets the true speed. For power-law nonlinearities
//! N <= B (u - eps)^{1+eta} the gap numerator is bounded in turn by an
//! explicit chain of elementary integrals (I <= J <= J1 + J2, J <= 2/eta),
//! which is how the bracket closes at the Brunet-Derrida rate as eps -> 0.

use crate::error::{FrontError, Result};
use crate::maximizer::MaximizerParams;
use crate::profiles::{CutoffProfile, Family};
use crate::quad;
use crate::speed_core::solve_phi_star;

pub const DEFAULT_R: f64 = 0.5;
const QUAD_REL_TOL: f64 = 1e-10;
const CROSS_CHECK_TOL: f64 = 1e-6;

/// Elementary-bound chain for power-law nonlinearities.
#[derive(Debug, Clone, Copy)]
pub struct JChain {
    pub b: f64,
    pub eta: f64,
    pub r: f64,
    /// Exact sigma-form integral with the (u - eps) factor kept.
    pub i_val: f64,
    /// Same with (u - eps) relaxed to u: the J integral.
    pub j_val: f64,
    /// Split point of the two-piece bound, (tan phi*)^{-(2+eta+r)/(3+eta)}.
    pub alpha: f64,
    pub j1_bound: f64,
    pub j2_bound: f64,
    /// Closed-form bound (2/eta)(1 - eps^eta) for the whole J integral.
    pub j_appendix_bound: f64,
    /// Set when eta <= 1: the chain is only proven for eta > 1, though it
    /// holds numerically throughout.
    pub weak_eta_hypothesis: bool,
}

#[derive(Debug, Clone)]
pub struct GapReport {
    pub epsilon: f64,
    /// Upper speed bound: the exact cutoff-linear speed c_L.
    pub c_upper: f64,
    /// Full denominator eps + int uhat'^2 of the maximizer, closed form.
    pub d: f64,
    /// int N(uhat) uhat'/s ds over [eps, 1/eps].
    pub gap_num: f64,
    /// 2 gap_num / D: the amount the squared speed can sit below c_L^2.
    pub gap: f64,
    pub c_lower: f64,
    /// Elementary chain, present for power-law profiles.
    pub chain: Option<JChain>,
}

/// D = eps (2 phi* + sin 2 phi*) / (4 cos^3 phi* sin phi*).
pub fn denominator_d(epsilon: f64) -> Result<f64> {
    let phi = solve_phi_star(epsilon, 1e-12)?;
    let (s, c) = phi.sin_cos();
    Ok(epsilon * (2.0 * phi + (2.0 * phi).sin()) / (4.0 * c * c * c * s))
}

/// Gap numerator in the s variable, integrated adaptively in log s.
pub fn gap_numerator(profile: &CutoffProfile) -> Result<f64> {
    let params = MaximizerParams::new(profile.epsilon())?;
    let integrand = |t: f64| {
        let s = t.exp();
        let (u, du) = params.eval(s);
        profile.nonlinearity(u.clamp(0.0, 1.0)).max(0.0) * du
    };
    quad::adaptive(
        &integrand,
        profile.epsilon().ln(),
        params.s0.ln(),
        QUAD_REL_TOL,
        0.0,
    )
}

/// Maximizer expressed in the contact-angle variable: sigma runs from 0
/// (where u = 1) to 2 phi* (where u = eps).
fn maximizer_sigma(sigma: f64, tan_phi: f64) -> f64 {
    (-sigma * tan_phi).exp() * (sigma.cos() + tan_phi * sigma.sin())
}

/// Same gap numerator after the change of variables
/// (eps / cos^2 phi*) int_0^{2 phi*} N(u(sigma)) sin(sigma) e^{sigma tan phi*}.
pub fn gap_numerator_sigma(profile: &CutoffProfile) -> Result<f64> {
    let epsilon = profile.epsilon();
    let phi = solve_phi_star(epsilon, 1e-12)?;
    let tan_phi = phi.tan();
    let integrand = |sigma: f64| {
        let u = maximizer_sigma(sigma, tan_phi).clamp(0.0, 1.0);
        profile.nonlinearity(u).max(0.0) * sigma.sin() * (sigma * tan_phi).exp()
    };
    let val = quad::adaptive(&integrand, 0.0, 2.0 * phi, QUAD_REL_TOL, 0.0)?;
    let c = phi.cos();
    Ok(epsilon / (c * c) * val)
}

/// Exponent of the integrating factor:
/// H(sigma) = sigma tan phi* - log(cos sigma + tan phi* sin sigma);
/// increasing, with H(2 phi*) = |log eps|.
pub fn sigma_exponent(sigma: f64, phi_star: f64) -> f64 {
    let t = phi_star.tan();
    sigma * t - (sigma.cos() + t * sigma.sin()).ln()
}

/// The elementary chain for N <= B (u - eps)^{1+eta}; r in (0, 1) tunes the
/// split point between the near-saturation and tail pieces.
pub fn analytic_j_chain(epsilon: f64, b: f64, eta: f64, r: f64) -> Result<JChain> {
    crate::error::check_epsilon(epsilon)?;
    if !(b.is_finite() && b > 0.0) {
        return Err(FrontError::ParameterOutOfRange(format!(
            "envelope coefficient B must be positive, got {b}"
        )));
    }
    if !(eta.is_finite() && eta > 0.0) {
        return Err(FrontError::ParameterOutOfRange(format!(
            "envelope exponent eta must be positive, got {eta}"
        )));
    }
    if !(r.is_finite() && r > 0.0 && r < 1.0) {
        return Err(FrontError::ParameterOutOfRange(format!(
            "split exponent r must lie in (0, 1), got {r}"
        )));
    }
    let phi = solve_phi_star(epsilon, 1e-12)?;
    let t = phi.tan();
    let upper = 2.0 * phi;

    let i_val = quad::adaptive(
        &|sigma: f64| {
            let u = maximizer_sigma(sigma, t);
            (u - epsilon).max(0.0).powf(1.0 + eta) * sigma.sin() * (sigma * t).exp()
        },
        0.0,
        upper,
        QUAD_REL_TOL,
        0.0,
    )?;
    let j_val = quad::adaptive(
        &|sigma: f64| {
            (sigma.cos() + t * sigma.sin()).powf(1.0 + eta)
                * sigma.sin()
                * (-sigma * eta * t).exp()
        },
        0.0,
        upper,
        QUAD_REL_TOL,
        0.0,
    )?;

    let alpha = t.powf(-(2.0 + eta + r) / (3.0 + eta));
    let j1_bound = (2f64).powf(eta - 1.0) * (alpha * alpha + alpha.powf(3.0 + eta) * t.powf(1.0 + eta));
    let j2_bound = (1.0 + t).powf(1.0 + eta) * (-alpha * eta * t).exp() * upper;
    let j_appendix_bound = -(2.0 / eta) * (-2.0 * eta * phi * t).exp_m1();

    Ok(JChain {
        b,
        eta,
        r,
        i_val,
        j_val,
        alpha,
        j1_bound,
        j2_bound,
        j_appendix_bound,
        weak_eta_hypothesis: eta <= 1.0,
    })
}

/// Chain entry point for a profile: only power-law nonlinearities satisfy
/// the pointwise envelope hypothesis with vanishing N at the cutoff.
pub fn analytic_j_chain_for_profile(profile: &CutoffProfile, r: f64) -> Result<JChain> {
    let epsilon = profile.epsilon();
    match profile.family() {
        Family::Power { b, eta } => analytic_j_chain(epsilon, *b, *eta, r),
        _ => {
            let probe = profile.nonlinearity((epsilon + 1e-12).min(1.0));
            Err(FrontError::ParameterOutOfRange(format!(
                "profile '{profile}' has N({epsilon}+) = {probe:.3e}; the elementary chain \
                 needs a power-law envelope vanishing at the cutoff"
            )))
        }
    }
}

/// Full two-sided report: quadrature gap (cross-checked in both variables)
/// plus the elementary chain when the profile supports it.
pub fn gap_report(profile: &CutoffProfile, r: f64) -> Result<GapReport> {
    let epsilon = profile.epsilon();
    let phi = solve_phi_star(epsilon, 1e-12)?;
    let c_upper = 2.0 * phi.sin();
    let d = denominator_d(epsilon)?;
    let gap_num = gap_numerator(profile)?;
    let check = gap_numerator_sigma(profile)?;
    let scale = gap_num.abs().max(1e-300);
    if (gap_num - check).abs() / scale > CROSS_CHECK_TOL && gap_num.abs() > 1e-14 {
        return Err(FrontError::QuadratureFailure(format!(
            "gap numerator disagrees between variables: {gap_num:.12e} vs {check:.12e}"
        )));
    }
    let gap = 2.0 * gap_num / d;
    let c_lower = (c_upper * c_upper - gap).max(0.0).sqrt();
    let chain = match profile.family() {
        Family::Power { .. } => Some(analytic_j_chain_for_profile(profile, r)?),
        _ => None,
    };
    Ok(GapReport {
        epsilon,
        c_upper,
        d,
        gap_num,
        gap,
        c_lower,
        chain,
    })
}

/// (c_lower, c_upper) for the profile's selected speed.
pub fn speed_bracket(profile: &CutoffProfile) -> Result<(f64, f64)> {
    let report = gap_report(profile, DEFAULT_R)?;
    Ok((report.c_lower, report.c_upper))
}
