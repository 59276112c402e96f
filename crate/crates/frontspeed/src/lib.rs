//! Speeds of pulled reaction-diffusion fronts with a cutoff.
//!
//! The library computes the exact traveling-wave speed of the cutoff-linear
//! problem from a single transcendental angle equation, evaluates the
//! variational principle behind it (closed-form maximizer, discrete trial
//! functions, projected gradient ascent), and produces two-sided speed
//! brackets for nonlinear profiles. Independent checks come from phase-plane
//! shooting and a semi-implicit PDE simulator.
//!
//! Entry points:
//! - [`speed_core::linear_front_speed`] — exact speed and companion scales.
//! - [`maximizer::build_maximizer`] — the closed-form optimal trial function.
//! - [`functional::eval_g`] / [`functional::eval_f`] — variational quotients.
//! - [`optimizer::maximize_g`] — numerical maximization over discrete trials.
//! - [`bounds::speed_bracket`] — rigorous lower/upper speed bounds.
//! - [`wavelab::shoot_wave_speed`] / [`wavelab::simulate_front`] — oracles.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod functional;
pub mod maximizer;
pub mod optimizer;
pub mod profiles;
pub mod quad;
pub mod speed_core;
pub mod tridiag;
pub mod wavelab;

pub use error::{FrontError, Result};
