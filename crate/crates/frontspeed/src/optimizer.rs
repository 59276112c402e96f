//! Projected gradient ascent for the quadratic functional over monotone
//! trials on a log grid of [eps, 1/eps].
//!
//! The raw Euclidean gradient of the Rayleigh-type quotient is dominated by
//! its high-frequency components and stalls far from the maximizer, so the
//! ascent direction is preconditioned with the derivative-energy stiffness
//! matrix (a discrete H^1 gradient). Feasibility — monotone, inside
//! [eps, 1], pinned at both ends — is restored after every step by clipping
//! followed by pool-adjacent-violators.

use crate::error::{FrontError, Result};
use crate::functional::{discrete_core, geomspace, TrialFunction};
use crate::speed_core::zfk_functional_bound;
use crate::tridiag;

#[derive(Debug, Clone, Copy)]
pub struct OptimizerConfig {
    pub n_nodes: usize,
    pub max_iters: usize,
    pub step0: f64,
    pub tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            n_nodes: 1024,
            max_iters: 500,
            step0: 0.1,
            tol: 1e-12,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.n_nodes < 64 {
            return Err(FrontError::ParameterOutOfRange(format!(
                "optimizer needs at least 64 nodes, got {}",
                self.n_nodes
            )));
        }
        if self.max_iters == 0 {
            return Err(FrontError::ParameterOutOfRange("max_iters must be positive".into()));
        }
        if !(self.step0.is_finite() && self.step0 > 0.0) {
            return Err(FrontError::ParameterOutOfRange(format!(
                "step0 must be positive, got {}",
                self.step0
            )));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(FrontError::ParameterOutOfRange(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub trial: TrialFunction,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Every accepted iterate satisfied the feasibility contract.
    pub feasible_all: bool,
    /// The objective increased strictly across every accepted step.
    pub monotone_objective: bool,
}

const MAX_HALVINGS: usize = 60;
const STEP_CAP: f64 = 1e3;

struct Grid {
    s: Vec<f64>,
    epsilon: f64,
    tail: f64,
}

impl Grid {
    fn objective(&self, u: &[f64]) -> f64 {
        let (core, energy) = discrete_core(&self.s, u, self.epsilon);
        0.5 * (core + self.tail) / (self.epsilon + energy)
    }

    /// d(objective)/d(u_i) assuming u >= eps on every panel (true for
    /// projected iterates, so the positive-part kink is never active).
    fn gradient(&self, u: &[f64], value: f64) -> Vec<f64> {
        let s = &self.s;
        let n = s.len();
        let (_, energy) = discrete_core(s, u, self.epsilon);
        let den = self.epsilon + energy;
        let mut g = vec![0.0; n];
        for i in 0..n - 1 {
            let ds = s[i + 1] - s[i];
            let b = (u[i + 1] - u[i]) / ds;
            let a = u[i] - b * s[i];
            let c1 = 1.0 / s[i] - 1.0 / s[i + 1];
            let lnr = (s[i + 1] / s[i]).ln();
            let dn_da = 2.0 * a * c1 + 2.0 * b * lnr;
            let dn_db = 2.0 * a * lnr + 2.0 * b * ds;
            let dd_db = 2.0 * b * ds;
            // a and b are linear in the two panel endpoints.
            let (da_i, db_i) = (1.0 + s[i] / ds, -1.0 / ds);
            let (da_j, db_j) = (-s[i] / ds, 1.0 / ds);
            g[i] += (0.5 * (dn_da * da_i + dn_db * db_i) - value * dd_db * db_i) / den;
            g[i + 1] += (0.5 * (dn_da * da_j + dn_db * db_j) - value * dd_db * db_j) / den;
        }
        g[0] = 0.0;
        g[n - 1] = 0.0;
        g
    }

    /// H^1 ascent direction: solve K d = g on interior nodes, where K is the
    /// stiffness matrix of the derivative energy with pinned ends.
    fn precondition(&self, g: &[f64]) -> Result<Vec<f64>> {
        let s = &self.s;
        let n = s.len();
        let w: Vec<f64> = (0..n - 1).map(|i| 1.0 / (s[i + 1] - s[i])).collect();
        let m = n - 2;
        let diag: Vec<f64> = (0..m).map(|k| w[k] + w[k + 1]).collect();
        let off: Vec<f64> = (1..m).map(|k| -w[k]).collect();
        let rhs: Vec<f64> = (0..m).map(|k| g[k + 1]).collect();
        let interior = tridiag::solve(&off, &diag, &off, &rhs)?;
        let mut d = vec![0.0; n];
        d[1..=m].copy_from_slice(&interior);
        Ok(d)
    }

    fn project(&self, u: &mut [f64]) {
        for v in u.iter_mut() {
            *v = v.clamp(self.epsilon, 1.0);
        }
        pava_nondecreasing(u);
        u[0] = self.epsilon;
        *u.last_mut().unwrap() = 1.0;
    }

    fn is_feasible(&self, u: &[f64]) -> bool {
        u[0] == self.epsilon
            && *u.last().unwrap() == 1.0
            && u.windows(2).all(|w| w[1] >= w[0] - 1e-12)
            && u.iter().all(|&v| (self.epsilon - 1e-12..=1.0 + 1e-12).contains(&v))
    }
}

/// In-place isotonic regression: least-squares nondecreasing fit.
pub fn pava_nondecreasing(u: &mut [f64]) {
    // Blocks of (sum, count) whose means must stay increasing.
    let mut sums: Vec<f64> = Vec::with_capacity(u.len());
    let mut counts: Vec<usize> = Vec::with_capacity(u.len());
    for &v in u.iter() {
        let mut sum = v;
        let mut count = 1usize;
        while let (Some(&ps), Some(&pc)) = (sums.last(), counts.last()) {
            if ps / pc as f64 > sum / count as f64 {
                sum += ps;
                count += pc;
                sums.pop();
                counts.pop();
            } else {
                break;
            }
        }
        sums.push(sum);
        counts.push(count);
    }
    let mut k = 0;
    for (sum, count) in sums.into_iter().zip(counts) {
        let mean = sum / count as f64;
        for _ in 0..count {
            u[k] = mean;
            k += 1;
        }
    }
}

/// Maximize the quadratic functional from the default log-ramp start.
pub fn maximize_g(epsilon: f64, config: &OptimizerConfig) -> Result<OptimizeResult> {
    maximize_g_from(epsilon, config, None)
}

/// Same, but optionally seeded with node values on the optimizer's own grid
/// (geomspace(eps, 1/eps, n_nodes)); used for stationarity checks.
pub fn maximize_g_from(
    epsilon: f64,
    config: &OptimizerConfig,
    init: Option<&[f64]>,
) -> Result<OptimizeResult> {
    crate::error::check_epsilon(epsilon)?;
    config.validate()?;
    let s0 = 1.0 / epsilon;
    let s = geomspace(epsilon, s0, config.n_nodes)?;
    let grid = Grid {
        epsilon,
        tail: (1.0 - epsilon * epsilon) / s0,
        s,
    };

    let mut u: Vec<f64> = match init {
        Some(values) => {
            if values.len() != config.n_nodes {
                return Err(FrontError::ParameterOutOfRange(format!(
                    "init has {} values, grid has {}",
                    values.len(),
                    config.n_nodes
                )));
            }
            values.to_vec()
        }
        None => {
            // Log ramp: linear in log s from eps at the cutoff to 1 at s0.
            let span = (s0 / epsilon).ln();
            grid.s
                .iter()
                .map(|&si| (si / epsilon).ln() / span * (1.0 - epsilon) + epsilon)
                .collect()
        }
    };
    grid.project(&mut u);

    let mut value = grid.objective(&u);
    let mut step = config.step0;
    let mut iterations = 0;
    let mut converged = false;
    let mut feasible_all = grid.is_feasible(&u);
    let mut monotone_objective = true;

    for _ in 0..config.max_iters {
        iterations += 1;
        let g = grid.gradient(&u, value);
        let d = grid.precondition(&g)?;

        let mut local = step;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let mut trial: Vec<f64> = u.iter().zip(&d).map(|(&ui, &di)| ui + local * di).collect();
            grid.project(&mut trial);
            let v = grid.objective(&trial);
            if v > value {
                accepted = Some((trial, v));
                break;
            }
            local *= 0.5;
        }
        let Some((u_new, v_new)) = accepted else {
            converged = true;
            break;
        };
        if v_new <= value {
            monotone_objective = false;
        }
        feasible_all &= grid.is_feasible(&u_new);
        let improvement = (v_new - value) / value.abs().max(1e-300);
        u = u_new;
        value = v_new;
        step = (local * 2.0).min(STEP_CAP);
        if improvement < config.tol {
            converged = true;
            break;
        }
    }

    let bound = zfk_functional_bound(epsilon)?;
    debug_assert!(value <= bound * (1.0 + 1e-12), "value {value} above coarse bound {bound}");
    let trial = TrialFunction::new(grid.s, u, s0)?;
    Ok(OptimizeResult {
        trial,
        value,
        iterations,
        converged,
        feasible_all,
        monotone_objective,
    })
}

/// Max scaled Euler–Lagrange residual |u + 2 V u'' s^2| over interior nodes
/// where neither box constraint is active; small at a true interior maximum.
pub fn el_residual_max(result: &OptimizeResult, epsilon: f64) -> f64 {
    let s = result.trial.s_grid();
    let u = result.trial.u_values();
    let v = result.value;
    let mut worst: f64 = 0.0;
    for i in 1..s.len() - 1 {
        let active = u[i] <= epsilon * (1.0 + 1e-9) || u[i] >= 1.0 - 1e-9;
        if active {
            continue;
        }
        let h0 = s[i] - s[i - 1];
        let h1 = s[i + 1] - s[i];
        let upp = 2.0 * ((u[i + 1] - u[i]) / h1 - (u[i] - u[i - 1]) / h0) / (h0 + h1);
        worst = worst.max((u[i] + 2.0 * v * upp * s[i] * s[i]).abs());
    }
    worst
}
