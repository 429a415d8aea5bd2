//! Adaptive attack detector.
//!
//! The detector runs on the controller side and sees only the delivered
//! observable `q~` and the issued command `u`. It keeps an observer `r^` of
//! the end-effector pose and an estimate `b^` of a scalar command gain:
//!
//! ```text
//! r^' = b^ J(q~) u - k1 (r^ - f(q~))
//! b^' = -k2 u^T J(q~)^T (r^ - f(q~)) - s (b^ - P(b^))
//! ```
//!
//! where `P` clamps to `[epsilon, 1]`. Both are integrated with explicit
//! Euler, and `b^` is clamped after every step so it never leaves the set.

use nalgebra::Vector6;

use crate::error::{Error, Result};
use crate::kinematics::{forward_kinematics, jacobian, DhParams};
use crate::simulator::SimLog;
use crate::types::{wrap_angle, JointVector, Pose};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorGains {
    /// Observer pull-in rate, 1/s.
    pub k1: f64,
    /// Adaptation gain.
    pub k2: f64,
    /// Pull-back gain toward the admissible set.
    pub s_gain: f64,
    /// Lower bound of the admissible set.
    pub epsilon: f64,
}

impl DetectorGains {
    pub fn new(k1: f64, k2: f64, s_gain: f64, epsilon: f64) -> Result<Self> {
        let g = Self {
            k1,
            k2,
            s_gain,
            epsilon,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.k1) && positive(self.k2) && positive(self.s_gain)) {
            return Err(Error::InvalidGains(format!(
                "k1, k2 and s_gain must be positive, got {}, {}, {}",
                self.k1, self.k2, self.s_gain
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidGains(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

impl Default for DetectorGains {
    fn default() -> Self {
        Self {
            k1: 10.0,
            k2: 200.0,
            s_gain: 50.0,
            epsilon: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorState {
    pub r_hat: Pose,
    pub beta_hat: f64,
}

impl DetectorState {
    /// Starts with no suspected attack (`b^ = 1`) and the observer on the
    /// first delivered pose.
    pub fn initial(q_tilde: &JointVector, model: &DhParams) -> Result<Self> {
        Ok(Self {
            r_hat: forward_kinematics(q_tilde, model)?,
            beta_hat: 1.0,
        })
    }

    /// `r^ - f(q~)`, orientation along the short arc.
    pub fn residual(&self, q_tilde: &JointVector, model: &DhParams) -> Result<Vector6<f64>> {
        Ok(self.r_hat.difference(&forward_kinematics(q_tilde, model)?))
    }
}

/// Clamp of `beta_hat` to `[epsilon, 1]`.
pub fn projection_gamma(beta_hat: f64, epsilon: f64) -> f64 {
    beta_hat.clamp(epsilon, 1.0)
}

/// One explicit-Euler step of the detector.
pub fn detector_step(
    state: &DetectorState,
    q_tilde: &JointVector,
    u: &JointVector,
    gains: &DetectorGains,
    dt: f64,
    model: &DhParams,
) -> Result<DetectorState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidConfig(format!("dt must be positive, got {dt}")));
    }
    q_tilde.ensure_finite("q_tilde")?;
    u.ensure_finite("u")?;
    if !(state.r_hat.is_finite() && state.beta_hat.is_finite()) {
        return Err(Error::NonFinite("detector state".into()));
    }

    let r = forward_kinematics(q_tilde, model)?;
    let jac = jacobian(q_tilde, model)?;
    let residual = state.r_hat.difference(&r);
    let ju: Vector6<f64> = Vector6::from_iterator((&jac * &**u).iter().copied());

    let beta = state.beta_hat;
    let r_hat_rate = ju * beta - residual * gains.k1;
    let beta_rate =
        -gains.k2 * ju.dot(&residual) - gains.s_gain * (beta - projection_gamma(beta, gains.epsilon));

    let mut r_hat = Pose::from_vector6(&(state.r_hat.to_vector6() + r_hat_rate * dt));
    r_hat.orientation = r_hat.orientation.map(wrap_angle);
    let beta_hat = projection_gamma(beta + beta_rate * dt, gains.epsilon);
    Ok(DetectorState { r_hat, beta_hat })
}

/// Largest deviation, over the logged steps, between the finite-differenced
/// residual `r~ = r^ - f(q~)` and `(b^ - 1) J(q~) u - k1 r~`.
///
/// Under an attack with `S_x S_u = I` and `d_u = 0`, the delivered
/// observable moves exactly as `q~' = u`, so the two sides agree up to the
/// integration error, which is first order in the step.
pub fn residual_dynamics_check(log: &SimLog, gains: &DetectorGains, model: &DhParams) -> Result<f64> {
    let rows = log.rows();
    if rows.len() < 2 {
        return Err(Error::LogTooShort(rows.len()));
    }
    let mut worst: f64 = 0.0;
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let dt = b.t - a.t;
        let res_a = a.r_hat.difference(&a.r_prime);
        let res_b = b.r_hat.difference(&b.r_prime);
        let mut d_res = res_b - res_a;
        for k in 3..6 {
            d_res[k] = wrap_angle(d_res[k]);
        }
        let jac = jacobian(&a.q_tilde, model)?;
        let ju: Vector6<f64> = Vector6::from_iterator((&jac * &*a.u).iter().copied());
        let predicted = ju * (a.beta_hat - 1.0) - res_a * gains.k1;
        worst = worst.max((d_res / dt - predicted).norm());
    }
    Ok(worst)
}
