//! Command-line surface. Data goes to stdout (or --out); diagnostics go to
//! stderr. Exit codes: 0 success, 2 validation error, 3 numerical failure,
//! 4 I/O failure.

use crate::bounds;
use crate::error::{FrontError, Result};
use crate::maximizer;
use crate::optimizer::{self, OptimizerConfig};
use crate::profiles::CutoffProfile;
use crate::speed_core::{self, SpeedReport, Spacing};
use crate::wavelab::{self, SimConfig};
use clap::{Parser, Subcommand};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "frontspeed",
    about = "Speeds of pulled reaction-diffusion fronts with a cutoff",
    version
)]
struct Cli {
    /// Optional key=value config file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write data output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact cutoff-linear speed and companions at one epsilon.
    Speed {
        #[arg(long)]
        epsilon: Option<f64>,
        /// text | csv | json
        #[arg(long)]
        format: Option<String>,
    },
    /// CSV of speeds over an epsilon range.
    Sweep {
        #[arg(long)]
        start: Option<f64>,
        #[arg(long)]
        end: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        /// log | linear
        #[arg(long)]
        spacing: Option<String>,
    },
    /// Sample the closed-form maximizer: CSV s,u,du_ds.
    Maximize {
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Projected gradient ascent on the functional: CSV s,u of the optimum.
    Optimize {
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        step0: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Two-sided speed bracket for a profile.
    Bounds {
        #[arg(long)]
        profile: Option<String>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Split exponent of the elementary chain, in (0, 1).
        #[arg(long)]
        r: Option<f64>,
        /// Emit a CSV row instead of the text report.
        #[arg(long)]
        csv: bool,
    },
    /// Traveling-wave speed by phase-plane shooting.
    Shoot {
        #[arg(long)]
        profile: Option<String>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Time-dependent front simulation: CSV t,x_front.
    Simulate {
        #[arg(long)]
        profile: Option<String>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long = "L")]
        l: Option<f64>,
        #[arg(long = "h")]
        h: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long = "T")]
        t_final: Option<f64>,
        #[arg(long)]
        ic: Option<f64>,
        #[arg(long)]
        window: Option<f64>,
        /// Also run the shooting method and report the comparison.
        #[arg(long)]
        compare: bool,
    },
}

/// Full round-trip precision so repeated runs are byte-identical.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

struct ConfigMap(HashMap<String, String>);

impl ConfigMap {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let mut map = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)?;
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    FrontError::ParameterOutOfRange(format!(
                        "config line {}: expected key=value, got '{line}'",
                        i + 1
                    ))
                })?;
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(ConfigMap(map))
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.parse(key)
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.parse(key)
    }

    fn bool(&self, key: &str) -> Result<Option<bool>> {
        self.parse(key)
    }

    fn string(&self, key: &str) -> Option<String> {
        self.0.get(key).cloned()
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| {
                FrontError::ParameterOutOfRange(format!("config key '{key}': bad value '{v}'"))
            }),
        }
    }
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| {
        FrontError::ParameterOutOfRange(format!("missing required --{flag} (flag or config)"))
    })
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(output) => {
            if let Err(e) = emit(&cli.out, &output) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &Option<PathBuf>, data: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, data)?,
        None => {
            use std::io::Write;
            // A single buffered write keeps output all-or-nothing.
            std::io::stdout().write_all(data.as_bytes())?;
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<String> {
    let conf = ConfigMap::load(cli.config.as_ref())?;
    match &cli.command {
        Command::Speed { epsilon, format } => {
            let epsilon = require(epsilon.or(conf.f64("epsilon")?), "epsilon")?;
            let format = format
                .clone()
                .or_else(|| conf.string("format"))
                .unwrap_or_else(|| "text".into());
            cmd_speed(epsilon, &format)
        }
        Command::Sweep {
            start,
            end,
            points,
            spacing,
        } => {
            let start = require(start.or(conf.f64("start")?), "start")?;
            let end = require(end.or(conf.f64("end")?), "end")?;
            let points = points.or(conf.usize("points")?).unwrap_or(50);
            let spacing = spacing
                .clone()
                .or_else(|| conf.string("spacing"))
                .unwrap_or_else(|| "log".into());
            let spacing = match spacing.as_str() {
                "log" => Spacing::Log,
                "linear" => Spacing::Linear,
                other => {
                    return Err(FrontError::ParameterOutOfRange(format!(
                        "spacing must be log or linear, got '{other}'"
                    )))
                }
            };
            cmd_sweep(start, end, points, spacing)
        }
        Command::Maximize { epsilon, nodes } => {
            let epsilon = require(epsilon.or(conf.f64("epsilon")?), "epsilon")?;
            let nodes = nodes
                .or(conf.usize("nodes")?)
                .unwrap_or(maximizer::DEFAULT_NODES);
            cmd_maximize(epsilon, nodes)
        }
        Command::Optimize {
            epsilon,
            nodes,
            max_iters,
            step0,
            tol,
        } => {
            let epsilon = require(epsilon.or(conf.f64("epsilon")?), "epsilon")?;
            let defaults = OptimizerConfig::default();
            let config = OptimizerConfig {
                n_nodes: nodes.or(conf.usize("nodes")?).unwrap_or(defaults.n_nodes),
                max_iters: max_iters
                    .or(conf.usize("max_iters")?)
                    .unwrap_or(defaults.max_iters),
                step0: step0.or(conf.f64("step0")?).unwrap_or(defaults.step0),
                tol: tol.or(conf.f64("tol")?).unwrap_or(defaults.tol),
            };
            cmd_optimize(epsilon, &config)
        }
        Command::Bounds {
            profile,
            epsilon,
            r,
            csv,
        } => {
            let epsilon = require(epsilon.or(conf.f64("epsilon")?), "epsilon")?;
            let spec = require(profile.clone().or_else(|| conf.string("profile")), "profile")?;
            let r = r.or(conf.f64("r")?).unwrap_or(bounds::DEFAULT_R);
            let csv = *csv || conf.bool("csv")?.unwrap_or(false);
            cmd_bounds(&spec, epsilon, r, csv)
        }
        Command::Shoot {
            profile,
            epsilon,
            tol,
        } => {
            let epsilon = require(epsilon.or(conf.f64("epsilon")?), "epsilon")?;
            let spec = require(profile.clone().or_else(|| conf.string("profile")), "profile")?;
            let tol = tol.or(conf.f64("tol")?).unwrap_or(1e-8);
            let profile = CutoffProfile::parse(&spec, epsilon)?;
            let c = wavelab::shoot_wave_speed(&profile, tol)?;
            eprintln!("shoot: profile {profile}, epsilon {epsilon}, tol {tol}");
            Ok(format!("{}\n", fmt(c)))
        }
        Command::Simulate {
            profile,
            epsilon,
            l,
            h,
            dt,
            t_final,
            ic,
            window,
            compare,
        } => {
            let epsilon = require(epsilon.or(conf.f64("epsilon")?), "epsilon")?;
            let spec = require(profile.clone().or_else(|| conf.string("profile")), "profile")?;
            let defaults = SimConfig::default();
            let config = SimConfig {
                l: l.or(conf.f64("L")?).unwrap_or(defaults.l),
                h: h.or(conf.f64("h")?).unwrap_or(defaults.h),
                dt: dt.or(conf.f64("dt")?).unwrap_or(defaults.dt),
                t_final: t_final.or(conf.f64("T")?).unwrap_or(defaults.t_final),
                ic_front_pos: ic.or(conf.f64("ic")?).unwrap_or(defaults.ic_front_pos),
                fit_window: window.or(conf.f64("window")?).unwrap_or(defaults.fit_window),
            };
            let compare = *compare || conf.bool("compare")?.unwrap_or(false);
            cmd_simulate(&spec, epsilon, &config, compare)
        }
    }
}

fn cmd_speed(epsilon: f64, format: &str) -> Result<String> {
    let r = speed_core::linear_front_speed(epsilon)?;
    let ratio = bd_ratio_of(&r);
    match format {
        "text" => Ok(format!(
            "epsilon   = {}\nphi_star  = {}\nc_L       = {}\nc_BD      = {}\nc_KPP     = {}\n\
             c_ZFK     = {}\nM         = {}\nzfk_bound = {}\nbd_ratio  = {}\n",
            fmt(r.epsilon),
            fmt(r.phi_star),
            fmt(r.c_l),
            fmt(r.c_bd),
            fmt(r.c_kpp),
            fmt(r.c_zfk),
            fmt(r.m),
            fmt(r.m_zfk_bound),
            fmt(ratio),
        )),
        "csv" => Ok(format!("{}{}", sweep_header(), sweep_row(&r))),
        "json" => Ok(format!(
            "{{\"epsilon\": {}, \"phi_star\": {}, \"c_L\": {}, \"c_BD\": {}, \"c_KPP\": {}, \
             \"c_ZFK\": {}, \"M\": {}, \"zfk_bound\": {}, \"bd_ratio\": {}}}\n",
            fmt(r.epsilon),
            fmt(r.phi_star),
            fmt(r.c_l),
            fmt(r.c_bd),
            fmt(r.c_kpp),
            fmt(r.c_zfk),
            fmt(r.m),
            fmt(r.m_zfk_bound),
            fmt(ratio),
        )),
        other => Err(FrontError::ParameterOutOfRange(format!(
            "format must be text, csv, or json, got '{other}'"
        ))),
    }
}

fn bd_ratio_of(r: &SpeedReport) -> f64 {
    let l = r.epsilon.ln();
    (2.0 - r.c_l) * l * l / (PI * PI)
}

fn sweep_header() -> String {
    "epsilon,phi_star,c_L,c_BD,c_ZFK,M,zfk_bound,bd_ratio\n".to_string()
}

fn sweep_row(r: &SpeedReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{}\n",
        fmt(r.epsilon),
        fmt(r.phi_star),
        fmt(r.c_l),
        fmt(r.c_bd),
        fmt(r.c_zfk),
        fmt(r.m),
        fmt(r.m_zfk_bound),
        fmt(bd_ratio_of(r)),
    )
}

fn cmd_sweep(start: f64, end: f64, points: usize, spacing: Spacing) -> Result<String> {
    let reports = speed_core::sweep(start, end, points, spacing)?;
    let mut out = sweep_header();
    for r in &reports {
        out.push_str(&sweep_row(r));
    }
    Ok(out)
}

fn cmd_maximize(epsilon: f64, nodes: usize) -> Result<String> {
    let (params, trial) = maximizer::build_maximizer_with_nodes(epsilon, nodes)?;
    let m = speed_core::variational_mass(epsilon)?;
    eprintln!(
        "maximize: phi_star {}, amplitude {}, s0 {}, M {}",
        params.phi_star, params.amplitude, params.s0, m
    );
    let mut out = String::from("s,u,du_ds\n");
    for &s in trial.s_grid() {
        let (u, du) = params.eval(s);
        out.push_str(&format!("{},{},{}\n", fmt(s), fmt(u), fmt(du)));
    }
    Ok(out)
}

fn cmd_optimize(epsilon: f64, config: &OptimizerConfig) -> Result<String> {
    let result = optimizer::maximize_g(epsilon, config)?;
    let m = speed_core::variational_mass(epsilon)?;
    eprintln!(
        "optimize: value {}, M {}, relative gap {:.3e}, iterations {}, converged {}, \
         feasible {}, monotone objective {}",
        result.value,
        m,
        (m - result.value).abs() / m,
        result.iterations,
        result.converged,
        result.feasible_all,
        result.monotone_objective
    );
    let mut out = String::from("s,u\n");
    for (s, u) in result.trial.s_grid().iter().zip(result.trial.u_values()) {
        out.push_str(&format!("{},{}\n", fmt(*s), fmt(*u)));
    }
    Ok(out)
}

fn cmd_bounds(spec: &str, epsilon: f64, r: f64, csv: bool) -> Result<String> {
    let profile = CutoffProfile::parse(spec, epsilon)?;
    let report = bounds::gap_report(&profile, r)?;
    if csv {
        return Ok(format!(
            "epsilon,c_lower,c_upper,D,gap_num,gap\n{},{},{},{},{},{}\n",
            fmt(report.epsilon),
            fmt(report.c_lower),
            fmt(report.c_upper),
            fmt(report.d),
            fmt(report.gap_num),
            fmt(report.gap),
        ));
    }
    let mut out = format!(
        "profile   = {profile}\nepsilon   = {}\nc_lower   = {}\nc_upper   = {}\nD         = {}\n\
         gap_num   = {}\ngap       = {}\n",
        fmt(report.epsilon),
        fmt(report.c_lower),
        fmt(report.c_upper),
        fmt(report.d),
        fmt(report.gap_num),
        fmt(report.gap),
    );
    if let Some(chain) = &report.chain {
        out.push_str(&format!(
            "chain:\n  B       = {}\n  eta     = {}\n  r       = {}\n  I       = {}\n  J       = {}\n\
             \x20 alpha   = {}\n  J1      = {}\n  J2      = {}\n  J_app   = {}\n  weak_eta = {}\n",
            fmt(chain.b),
            fmt(chain.eta),
            fmt(chain.r),
            fmt(chain.i_val),
            fmt(chain.j_val),
            fmt(chain.alpha),
            fmt(chain.j1_bound),
            fmt(chain.j2_bound),
            fmt(chain.j_appendix_bound),
            chain.weak_eta_hypothesis,
        ));
    }
    Ok(out)
}

fn cmd_simulate(spec: &str, epsilon: f64, config: &SimConfig, compare: bool) -> Result<String> {
    let profile = CutoffProfile::parse(spec, epsilon)?;
    let mut result = wavelab::simulate_front(&profile, config)?;
    if compare {
        match wavelab::shoot_wave_speed(&profile, 1e-8) {
            Ok(c) => {
                result.shoot_speed = Some(c);
                eprintln!(
                    "simulate: fitted {} vs shoot {} (relative {:.3e})",
                    result.fitted_speed,
                    c,
                    (result.fitted_speed - c).abs() / c
                );
            }
            Err(e) => eprintln!("simulate: shooting comparison unavailable: {e}"),
        }
    }
    eprintln!(
        "simulate: fitted_speed {}, fit_residual {:.3e}, samples {}",
        result.fitted_speed,
        result.fit_residual,
        result.times.len()
    );
    let mut out = String::from("t,x_front\n");
    for (t, x) in result.times.iter().zip(&result.front_positions) {
        out.push_str(&format!("{},{}\n", fmt(*t), fmt(*x)));
    }
    Ok(out)
}
