//! Fixed-step closed loop: arm, two attacked channels, controller, detector.
//!
//! Within one step, with `t = k dt`:
//!
//! 1. `q~ = S_x q + d_x` (observable channel)
//! 2. `u = control_law(q~, r_d(t))`
//! 3. detector update from `(q~, u)`
//! 4. `u~ = S_u u + d_u` (command channel)
//! 5. joint-limit projection of `u~`
//! 6. `q <- q + dt u~`
//!
//! Only the arm state `q` is integrated. The dynamics seen through the
//! observable channel are whatever falls out of the log.

mod log;
mod metrics;

pub use log::{LogRow, SimLog};
pub use metrics::{compare_runs, compute_metrics, ColumnDiscrepancy, ErrorMetrics, RunComparison};

use crate::attacks::{default_initial_posture, preset_scenario, AttackPair, ScenarioKind};
use crate::controller::{
    control_law, project_joint_limits, smiley_center_for_start, smiley_trajectory, ControllerGains,
    Trajectory,
};
use crate::detector::{detector_step, DetectorGains, DetectorState};
use crate::error::{check_len, Error, Result};
use crate::kinematics::{forward_kinematics, RobotModel};
use crate::types::JointVector;

pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_DURATION: f64 = 60.0;
/// Face radius of the default smiley drawing, m.
pub const DEFAULT_SMILEY_RADIUS: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub model: RobotModel,
    pub trajectory: Trajectory,
    pub attack: AttackPair,
    pub controller: ControllerGains,
    pub detector: DetectorGains,
    pub q0: JointVector,
    pub dt: f64,
    pub duration: f64,
}

impl SimConfig {
    /// A bundled scenario on the six-axis model from the default posture,
    /// drawing the default smiley that starts at `f(q0)`.
    pub fn scenario(kind: ScenarioKind) -> Result<Self> {
        let q0 = default_initial_posture();
        let attack = preset_scenario(kind, &q0)?;
        Self::with_attack(attack)
    }

    /// Default setup with an arbitrary attack pair.
    pub fn with_attack(attack: AttackPair) -> Result<Self> {
        let model = RobotModel::lrmate_like();
        let q0 = default_initial_posture();
        let trajectory = default_smiley(&model, &q0, DEFAULT_SMILEY_RADIUS, DEFAULT_DURATION)?;
        let cfg = Self {
            model,
            trajectory,
            attack,
            controller: ControllerGains::default(),
            detector: DetectorGains::default(),
            q0,
            dt: DEFAULT_DT,
            duration: DEFAULT_DURATION,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Number of integration steps; the log has one more row than this.
    pub fn steps(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.duration.is_finite() && self.duration >= self.dt) {
            return Err(Error::InvalidConfig(format!(
                "duration {} must be at least dt {}",
                self.duration, self.dt
            )));
        }
        let n = self.model.dof();
        check_len("initial posture", n, self.q0.len())?;
        check_len("attack pair", n, self.attack.dim())?;
        self.q0.ensure_finite("q0")?;
        if !self.model.limits.contains(self.q0.as_slice()) {
            return Err(Error::InvalidConfig(format!(
                "q0 {:?} deg lies outside the joint limits",
                self.q0.to_degrees()
            )));
        }
        self.detector.validate()
    }
}

/// Smiley of face radius `radius` whose first point is `f(q0)`.
pub fn default_smiley(model: &RobotModel, q0: &JointVector, radius: f64, duration: f64) -> Result<Trajectory> {
    let start = forward_kinematics(q0, &model.dh)?;
    smiley_trajectory(&smiley_center_for_start(&start, radius), radius, duration)
}

/// Advances the loop by one step from `(q, det)` at time `t`.
pub fn step(
    q: &JointVector,
    cfg: &SimConfig,
    det: &DetectorState,
    t: f64,
) -> Result<(JointVector, LogRow, DetectorState)> {
    let dh = &cfg.model.dh;
    q.ensure_finite("q")?;

    let q_tilde = cfg.attack.observable.apply(q)?;
    q_tilde.ensure_finite("q_tilde")?;
    let r_d = cfg.trajectory.sample(t);
    let u = control_law(&q_tilde, &r_d, &cfg.controller, dh)?;
    u.ensure_finite("u")?;
    let det_next = detector_step(det, &q_tilde, &u, &cfg.detector, cfg.dt, dh)?;
    let u_attacked = cfg.attack.command.apply(&u)?;
    let (u_tilde, clamped) = project_joint_limits(q, &u_attacked, &cfg.model.limits)?;
    u_tilde.ensure_finite("u_tilde")?;

    let q_next = JointVector::new(&**q + &*u_tilde * cfg.dt);
    q_next.ensure_finite("q_next")?;

    let row = LogRow {
        t,
        r: forward_kinematics(q, dh)?,
        r_prime: forward_kinematics(&q_tilde, dh)?,
        q: q.clone(),
        q_tilde,
        u,
        u_tilde,
        r_d,
        r_hat: det.r_hat,
        beta_hat: det.beta_hat,
        clamped,
    };
    Ok((q_next, row, det_next))
}

/// Runs the whole horizon. Row `k` holds the state at `t = k dt` and the
/// signals computed from it, for `k = 0..=steps`.
pub fn run_scenario(cfg: &SimConfig) -> Result<SimLog> {
    cfg.validate()?;
    let steps = cfg.steps();
    let mut q = cfg.q0.clone();
    let q_tilde0 = cfg.attack.observable.apply(&q)?;
    let mut det = DetectorState::initial(&q_tilde0, &cfg.model.dh)?;
    let mut rows = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = k as f64 * cfg.dt;
        let (q_next, row, det_next) = step(&q, cfg, &det, t)?;
        rows.push(row);
        q = q_next;
        det = det_next;
    }
    Ok(SimLog::new(cfg.attack.label.clone(), cfg.dt, rows))
}
