//! # tether-guide
//!
//! Simulation and stability analysis for a human physically guided by a
//! cable-tethered aerial robot.
//!
//! The human holds a handle connected by an elastic cable to an admittance
//! controlled aerial vehicle. The vehicle steers the human toward a target
//! position using cable forces only. This crate provides:
//!
//! - [`model`]: the coupled human/robot/cable dynamics (mass-damper human,
//!   virtual mass-damper robot, unilateral cable spring)
//! - [`control`]: the two guidance laws, a robot-state-only law and its
//!   human-velocity-feedback extension, plus reference generation and
//!   input saturation
//! - [`stability`]: closed-form stability conditions, steady-state
//!   predictors, Lyapunov/storage functions and a numerical passivity check
//! - [`savgol`]: Savitzky-Golay endpoint differentiation for causal
//!   velocity estimation
//! - [`sim`]: a deterministic fixed-step integrator with disturbance
//!   injection, velocity estimation and trajectory logging
//! - [`trajectory`]: trajectory logs, run statistics and CSV emission

pub mod control;
pub mod error;
pub mod linalg;
pub mod model;
pub mod savgol;
pub mod sim;
pub mod stability;
pub mod trajectory;

pub use error::Error;
pub use linalg::{Mat3, Vec3};

/// Standard gravitational acceleration [m/s^2].
pub const GRAVITY: f64 = 9.81;

/// Default handle height above the ground plane [m].
pub const DEFAULT_HANDLE_HEIGHT: f64 = 1.0;
