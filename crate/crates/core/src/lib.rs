//! Pulse-width predictive control for linear time-varying plants.
//!
//! The crate is organized bottom-up:
//!
//! - [`orbit`]: Kepler bookkeeping for the elliptical target orbit (mean
//!   motion, eccentric anomaly, anomaly conversions).
//! - [`ya`]: closed-form Tschauner-Hempel relative motion — the
//!   Yamanaka-Ankersen fundamental matrix pair, state transition, thrust
//!   antiderivatives, and input columns for PWM / PAM / impulsive actuation.
//! - [`prediction`]: stacked discrete LTV prediction matrices and the
//!   explicit PWM linearization blocks.
//! - [`qp`]: dense convex QP/LP active-set solver plus the 1-norm splitting
//!   used by the hot-start programs.
//! - [`planner`]: hot start, PWM conversion, cost evaluation, and the
//!   iterative linearize-and-refine loop.
//! - [`mpc`]: the receding-horizon controller with warm-start shifting.

pub mod error;
pub mod mpc;
pub mod orbit;
pub mod planner;
pub mod prediction;
pub mod qp;
pub mod state;
pub mod ya;

pub use error::{Error, Result};
pub use orbit::OrbitParams;
pub use state::StateVector;
