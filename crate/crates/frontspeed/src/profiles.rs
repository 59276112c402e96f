//! Reaction profiles f(u) = u - N(u) with a hard cutoff below epsilon.
//!
//! Every profile is normalized so the pulled-front linearization has unit
//! growth rate: f'(0+) = 1 for the underlying (un-cutoff) reaction. The
//! cutoff zeroes the reaction on [0, epsilon] and, by convention, at u = 1.

use crate::error::{check_epsilon, FrontError, Result};
use std::fmt;
use std::path::Path;

const KPP_GRID: usize = 10_000;
const KPP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub enum Family {
    /// f(u) = u: the pure linearized reaction, N = 0.
    Linear,
    /// f(u) = u - u^2.
    Fisher,
    /// f(u) = u - u^3.
    BdCubic,
    /// f(u) = u - B (u - epsilon)^{1+eta} above the cutoff.
    Power { b: f64, eta: f64 },
    /// Piecewise-linear interpolation of (u, f) samples covering [0, 1].
    Table { u: Vec<f64>, f: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct CutoffProfile {
    epsilon: f64,
    family: Family,
}

impl CutoffProfile {
    pub fn new(epsilon: f64, family: Family) -> Result<Self> {
        check_epsilon(epsilon)?;
        match &family {
            Family::Power { b, eta } => {
                if !(b.is_finite() && *b > 0.0) {
                    return Err(FrontError::ParameterOutOfRange(format!(
                        "power-law coefficient B must be positive, got {b}"
                    )));
                }
                if !(eta.is_finite() && *eta > 0.0) {
                    return Err(FrontError::ParameterOutOfRange(format!(
                        "power-law exponent eta must be positive, got {eta}"
                    )));
                }
            }
            Family::Table { u, f } => validate_table(u, f)?,
            _ => {}
        }
        let profile = CutoffProfile { epsilon, family };
        profile.check_kpp()?;
        Ok(profile)
    }

    /// Parse `linear | fisher | cubic | power:B=<f>,eta=<f> | table:<path>`.
    pub fn parse(spec: &str, epsilon: f64) -> Result<Self> {
        let spec = spec.trim();
        let family = match spec {
            "linear" => Family::Linear,
            "fisher" => Family::Fisher,
            "cubic" => Family::BdCubic,
            _ if spec.starts_with("power:") => parse_power(&spec["power:".len()..])?,
            _ if spec.starts_with("table:") => load_table(Path::new(&spec["table:".len()..]))?,
            _ => {
                return Err(FrontError::ParameterOutOfRange(format!(
                    "unknown profile '{spec}' (expected linear | fisher | cubic | \
                     power:B=<f>,eta=<f> | table:<path>)"
                )))
            }
        };
        CutoffProfile::new(epsilon, family)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Cutoff reaction: 0 on [0, epsilon] and at u >= 1, u - N(u) between.
    pub fn reaction(&self, u: f64) -> f64 {
        if u <= self.epsilon || u >= 1.0 {
            return 0.0;
        }
        u - self.nonlinearity(u)
    }

    /// N(u) of the underlying reaction, without the cutoff's zeroing.
    pub fn nonlinearity(&self, u: f64) -> f64 {
        match &self.family {
            Family::Linear => 0.0,
            Family::Fisher => u * u,
            Family::BdCubic => u * u * u,
            Family::Power { b, eta } => {
                let d = u - self.epsilon;
                if d > 0.0 {
                    b * d.powf(1.0 + eta)
                } else {
                    0.0
                }
            }
            Family::Table { u: us, f: fs } => u - interp(us, fs, u),
        }
    }

    /// Exact integral of the cutoff reaction from 0 to u.
    pub fn reaction_integral(&self, u: f64) -> Result<f64> {
        if !(-1e-12..=1.0 + 1e-12).contains(&u) {
            return Err(FrontError::DomainError(format!(
                "reaction integral is defined on [0, 1], got u = {u}"
            )));
        }
        let u = u.clamp(0.0, 1.0);
        let eps = self.epsilon;
        if u <= eps {
            return Ok(0.0);
        }
        let quad = 0.5 * (u * u - eps * eps);
        Ok(match &self.family {
            Family::Linear => quad,
            Family::Fisher => quad - (u.powi(3) - eps.powi(3)) / 3.0,
            Family::BdCubic => quad - (u.powi(4) - eps.powi(4)) / 4.0,
            Family::Power { b, eta } => quad - b * (u - eps).powf(2.0 + eta) / (2.0 + eta),
            Family::Table { u: us, f: fs } => table_integral(us, fs, eps, u),
        })
    }

    /// One-sided limit of the reaction as u -> 1⁻ (ignores the f(1) = 0
    /// convention, which only touches a single point).
    pub fn reaction_limit_at_one(&self) -> f64 {
        match &self.family {
            Family::Linear => 1.0,
            Family::Fisher | Family::BdCubic => 0.0,
            Family::Power { b, eta } => 1.0 - b * (1.0 - self.epsilon).powf(1.0 + eta),
            Family::Table { u, f } => interp(u, f, 1.0),
        }
    }

    /// One-sided derivative f'(1⁻); finite difference for tables.
    pub fn reaction_slope_at_one(&self) -> f64 {
        match &self.family {
            Family::Linear => 1.0,
            Family::Fisher => -1.0,
            Family::BdCubic => -2.0,
            Family::Power { b, eta } => 1.0 - b * (1.0 + eta) * (1.0 - self.epsilon).powf(*eta),
            Family::Table { u, f } => {
                let h = 1e-6;
                (interp(u, f, 1.0) - interp(u, f, 1.0 - h)) / h
            }
        }
    }

    /// KPP gate: 0 <= f(u) <= u on a dense grid of (epsilon, 1).
    fn check_kpp(&self) -> Result<()> {
        let eps = self.epsilon;
        for j in 1..KPP_GRID {
            let u = eps + (1.0 - eps) * j as f64 / KPP_GRID as f64;
            let f = self.reaction(u);
            if !f.is_finite() || f < -KPP_SLACK {
                return Err(FrontError::KppViolation(format!(
                    "f({u:.6}) = {f:.6e} is negative"
                )));
            }
            if f > u + KPP_SLACK {
                return Err(FrontError::KppViolation(format!(
                    "f({u:.6}) = {f:.6e} exceeds u (N(u) < 0)"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for CutoffProfile {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Linear => write!(w, "linear"),
            Family::Fisher => write!(w, "fisher"),
            Family::BdCubic => write!(w, "cubic"),
            Family::Power { b, eta } => write!(w, "power:B={b},eta={eta}"),
            Family::Table { u, .. } => write!(w, "table[{} rows]", u.len()),
        }
    }
}

fn parse_power(params: &str) -> Result<Family> {
    let mut b = None;
    let mut eta = None;
    for part in params.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(|| {
            FrontError::ParameterOutOfRange(format!("bad power-law parameter '{part}'"))
        })?;
        let parsed: f64 = value.trim().parse().map_err(|_| {
            FrontError::ParameterOutOfRange(format!("bad float '{value}' for '{key}'"))
        })?;
        match key.trim() {
            "B" => b = Some(parsed),
            "eta" => eta = Some(parsed),
            other => {
                return Err(FrontError::ParameterOutOfRange(format!(
                    "unknown power-law key '{other}' (expected B, eta)"
                )))
            }
        }
    }
    match (b, eta) {
        (Some(b), Some(eta)) => Ok(Family::Power { b, eta }),
        _ => Err(FrontError::ParameterOutOfRange(
            "power-law profile needs both B=<f> and eta=<f>".into(),
        )),
    }
}

fn load_table(path: &Path) -> Result<Family> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((_, l)) => break l,
            None => return Err(FrontError::BadTable("empty table file".into())),
        }
    };
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != ["u", "f"] {
        return Err(FrontError::BadTable(format!(
            "expected header 'u,f', got '{header}'"
        )));
    }
    let mut us = Vec::new();
    let mut fs = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (a, b) = line.split_once(',').ok_or_else(|| {
            FrontError::BadTable(format!("line {}: expected 'u,f', got '{line}'", idx + 1))
        })?;
        let u: f64 = a.trim().parse().map_err(|_| {
            FrontError::BadTable(format!("line {}: bad float '{a}'", idx + 1))
        })?;
        let f: f64 = b.trim().parse().map_err(|_| {
            FrontError::BadTable(format!("line {}: bad float '{b}'", idx + 1))
        })?;
        us.push(u);
        fs.push(f);
    }
    Ok(Family::Table { u: us, f: fs })
}

fn validate_table(us: &[f64], fs: &[f64]) -> Result<()> {
    if us.len() < 2 {
        return Err(FrontError::BadTable("need at least two rows".into()));
    }
    if us.iter().chain(fs.iter()).any(|v| !v.is_finite()) {
        return Err(FrontError::BadTable("non-finite entry".into()));
    }
    if us[0].abs() > 1e-12 || (us[us.len() - 1] - 1.0).abs() > 1e-12 {
        return Err(FrontError::BadTable(format!(
            "u must run from 0 to 1, got [{}, {}]",
            us[0],
            us[us.len() - 1]
        )));
    }
    if us.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FrontError::BadTable("u samples must be strictly increasing".into()));
    }
    if fs[0].abs() > 1e-12 {
        return Err(FrontError::BadTable(format!("f(0) must be 0, got {}", fs[0])));
    }
    Ok(())
}

/// Piecewise-linear interpolation with clamped ends; us strictly increasing.
fn interp(us: &[f64], fs: &[f64], x: f64) -> f64 {
    if x <= us[0] {
        return fs[0];
    }
    if x >= us[us.len() - 1] {
        return fs[fs.len() - 1];
    }
    let i = us.partition_point(|&v| v <= x) - 1;
    let t = (x - us[i]) / (us[i + 1] - us[i]);
    fs[i] + t * (fs[i + 1] - fs[i])
}

/// Exact integral of the interpolant over [lo, hi] (trapezoids, with partial
/// end panels cut at lo and hi).
fn table_integral(us: &[f64], fs: &[f64], lo: f64, hi: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..us.len() - 1 {
        let a = us[i].max(lo);
        let b = us[i + 1].min(hi);
        if b > a {
            total += 0.5 * (interp(us, fs, a) + interp(us, fs, b)) * (b - a);
        }
    }
    total
}
