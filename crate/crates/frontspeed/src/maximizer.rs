//! Closed-form maximizer of the variational functional for the cutoff
//! linear profile.
//!
//! On [0, epsilon] the maximizer is the identity ramp; on [epsilon, 1/eps]
//! it is A sqrt(s) cos(phase(s)) with phase running linearly in log s from
//! -phi* to +phi*; beyond s0 = 1/eps it is frozen at 1. The amplitude
//! A = sqrt(eps)/cos(phi*) makes the pieces meet with matching value and
//! slope at epsilon, and u(s0) = 1 with zero slope at s0.

use crate::error::Result;
use crate::functional::TrialFunction;
use crate::speed_core::solve_phi_star;

pub const DEFAULT_NODES: usize = 2048;

#[derive(Debug, Clone, Copy)]
pub struct MaximizerParams {
    pub epsilon: f64,
    pub phi_star: f64,
    /// Amplitude sqrt(eps) / cos(phi*).
    pub amplitude: f64,
    /// Right edge of the oscillatory piece: 1 / eps.
    pub s0: f64,
}

impl MaximizerParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        let phi_star = solve_phi_star(epsilon, 1e-12)?;
        Ok(MaximizerParams {
            epsilon,
            phi_star,
            amplitude: epsilon.sqrt() / phi_star.cos(),
            s0: 1.0 / epsilon,
        })
    }

    /// Phase of the cosine piece: linear in log s, -phi* at eps, +phi* at s0.
    pub fn phase(&self, s: f64) -> f64 {
        0.5 * (s / self.epsilon).ln() / self.phi_star.tan() - self.phi_star
    }

    /// (u, du/ds) at s >= 0; clamps to the frozen tails outside [eps, s0].
    pub fn eval(&self, s: f64) -> (f64, f64) {
        if s <= self.epsilon {
            return (s.max(0.0), 1.0);
        }
        if s >= self.s0 {
            return (1.0, 0.0);
        }
        let phi = self.phase(s);
        let (sin_phi, cos_phi) = phi.sin_cos();
        let cot = 1.0 / self.phi_star.tan();
        let root = s.sqrt();
        let u = self.amplitude * root * cos_phi;
        let du = 0.5 * self.amplitude / root * (cos_phi - cot * sin_phi);
        (u, du)
    }
}

/// Maximizer parameters plus a sampled trial on a log grid of [eps, 1/eps].
pub fn build_maximizer(epsilon: f64) -> Result<(MaximizerParams, TrialFunction)> {
    build_maximizer_with_nodes(epsilon, DEFAULT_NODES)
}

pub fn build_maximizer_with_nodes(
    epsilon: f64,
    n_nodes: usize,
) -> Result<(MaximizerParams, TrialFunction)> {
    let params = MaximizerParams::new(epsilon)?;
    let mut s_grid = crate::functional::geomspace(epsilon, params.s0, n_nodes)?;
    // Endpoints are pinned exactly so the trial's tails align with the
    // analytic pieces.
    *s_grid.first_mut().unwrap() = epsilon;
    *s_grid.last_mut().unwrap() = params.s0;
    let u: Vec<f64> = s_grid.iter().map(|&s| params.eval(s).0).collect();
    let trial = TrialFunction::new(s_grid, u, params.s0)?.with_analytic(params);
    Ok((params, trial))
}
