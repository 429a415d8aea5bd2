//! Closed-loop simulation of affine false-data-injection attacks on a
//! remotely controlled manipulator.
//!
//! The loop is a Jacobian-transpose kinematic controller talking to a
//! velocity-controlled arm over two channels. An attacker sits on both:
//! the observable channel delivers `q~ = S_x q + d_x` and the command
//! channel delivers `u~ = S_u u + d_u`. An adaptive detector running next
//! to the controller estimates a scalar command gain from what it sees.
//!
//! Modules:
//! - [`kinematics`]: DH chains, forward kinematics, Jacobians.
//! - [`attacks`]: affine attacks, the undetectability conditions, synthesis, presets.
//! - [`controller`]: control law, joint-limit projection, trajectories.
//! - [`detector`]: the adaptive attack detector.
//! - [`simulator`]: fixed-step closed loop, logs, metrics, run comparison.

pub mod attacks;
pub mod controller;
pub mod detector;
pub mod error;
pub mod kinematics;
pub mod simulator;
pub mod types;

pub use error::{Error, Result};
pub use types::{wrap_angle, JointVector, Pose};
