//! Remote controller: Jacobian-transpose kinematic law, joint-limit
//! projection and desired-trajectory sources.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{Vector3, Vector6};

use crate::error::{check_len, Error, Result};
use crate::kinematics::{forward_kinematics, jacobian, DhParams, JointLimits};
use crate::types::{wrap_angle, JointVector, Pose};

/// Default proportional gain, 1/s.
pub const DEFAULT_KP: f64 = 5.0;

/// Per-axis task-space gain applied before the transpose map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerGains {
    kp: Vector6<f64>,
}

impl ControllerGains {
    pub fn uniform(kp: f64) -> Result<Self> {
        Self::per_axis([kp; 6])
    }

    pub fn per_axis(kp: [f64; 6]) -> Result<Self> {
        if kp.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
            return Err(Error::InvalidGains(format!("controller gains must be positive, got {kp:?}")));
        }
        Ok(Self {
            kp: Vector6::from_column_slice(&kp),
        })
    }

    pub fn kp(&self) -> &Vector6<f64> {
        &self.kp
    }
}

impl Default for ControllerGains {
    fn default() -> Self {
        Self::uniform(DEFAULT_KP).expect("default gain is positive")
    }
}

/// `u = J(q_obs)^T K (r_d - f(q_obs))`.
///
/// `q_obs` is whatever the observable channel delivered. The law never
/// inverts `J`, so singular configurations are fine.
pub fn control_law(
    q_obs: &JointVector,
    r_d: &Pose,
    gains: &ControllerGains,
    model: &DhParams,
) -> Result<JointVector> {
    let r = forward_kinematics(q_obs, model)?;
    let jac = jacobian(q_obs, model)?;
    let error = r_d.difference(&r).component_mul(&gains.kp);
    Ok(JointVector::new(jac.transpose() * error))
}

/// Per-joint velocity clamp plus a stop in the outward direction for joints
/// sitting on a displacement bound. The flag is true when anything changed.
pub fn project_joint_limits(
    q: &JointVector,
    u: &JointVector,
    limits: &JointLimits,
) -> Result<(JointVector, bool)> {
    check_len("joint vector vs limits", limits.len(), q.len())?;
    check_len("command vs limits", limits.len(), u.len())?;
    let mut out = u.clone();
    let mut clamped = false;
    for (i, lim) in limits.iter().enumerate() {
        let mut v = u[i].clamp(-lim.velocity_max, lim.velocity_max);
        if (q[i] >= lim.max && v > 0.0) || (q[i] <= lim.min && v < 0.0) {
            v = 0.0;
        }
        if v != u[i] {
            clamped = true;
        }
        out[i] = v;
    }
    Ok((out, clamped))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub time: f64,
    pub pose: Pose,
}

/// Piecewise-linear desired trajectory.
///
/// Positions are interpolated linearly; orientation components move along
/// the shortest arc between waypoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    waypoints: Vec<Waypoint>,
}

impl Trajectory {
    pub fn new(waypoints: Vec<Waypoint>) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::InvalidTrajectory(format!(
                "need at least 2 waypoints, got {}",
                waypoints.len()
            )));
        }
        for (i, w) in waypoints.iter().enumerate() {
            if !(w.time.is_finite() && w.pose.is_finite()) {
                return Err(Error::InvalidTrajectory(format!("waypoint {i} is not finite")));
            }
        }
        if let Some(i) = waypoints.windows(2).position(|w| !(w[1].time > w[0].time)) {
            return Err(Error::InvalidTrajectory(format!(
                "waypoint times must increase strictly (at index {})",
                i + 1
            )));
        }
        Ok(Self { waypoints })
    }

    /// A trajectory holding `pose` over `[0, duration]`.
    pub fn hold(pose: Pose, duration: f64) -> Result<Self> {
        Self::new(vec![
            Waypoint { time: 0.0, pose },
            Waypoint { time: duration, pose },
        ])
    }

    pub fn waypoints(&self) -> &[Waypoint] {
        &self.waypoints
    }

    pub fn start_time(&self) -> f64 {
        self.waypoints[0].time
    }

    pub fn end_time(&self) -> f64 {
        self.waypoints[self.waypoints.len() - 1].time
    }

    pub fn duration(&self) -> f64 {
        self.end_time() - self.start_time()
    }

    /// Sum of straight-line distances between consecutive positions, m.
    pub fn path_length(&self) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| (w[1].pose.position - w[0].pose.position).norm())
            .sum()
    }

    /// Pose at time `t`, clamped to the end points outside the time span.
    pub fn sample(&self, t: f64) -> Pose {
        let wps = &self.waypoints;
        if t <= wps[0].time {
            return wps[0].pose;
        }
        let last = wps[wps.len() - 1];
        if t >= last.time {
            return last.pose;
        }
        // First waypoint strictly after t; 1 <= idx < len.
        let idx = wps.partition_point(|w| w.time <= t);
        let (a, b) = (&wps[idx - 1], &wps[idx]);
        if t == a.time {
            return a.pose;
        }
        let s = (t - a.time) / (b.time - a.time);
        let position = a.pose.position + (b.pose.position - a.pose.position) * s;
        let d_o = (b.pose.orientation - a.pose.orientation).map(wrap_angle);
        let orientation = (a.pose.orientation + d_o * s).map(wrap_angle);
        Pose::new(position, orientation)
    }

    /// Parses `time x y z roll pitch yaw` rows (s, m, rad). `#` starts a comment.
    pub fn parse(src: &str, origin: &str) -> Result<Self> {
        let mut waypoints = Vec::new();
        for (idx, raw) in src.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let values: Vec<f64> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| Error::parse(origin, lineno, format!("bad number `{t}`")))
                })
                .collect::<Result<_>>()?;
            if values.len() != 7 {
                return Err(Error::parse(
                    origin,
                    lineno,
                    format!("expected 7 columns (t x y z roll pitch yaw), found {}", values.len()),
                ));
            }
            waypoints.push(Waypoint {
                time: values[0],
                pose: Pose::from_array([values[1], values[2], values[3], values[4], values[5], values[6]]),
            });
        }
        Self::new(waypoints)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&src, &path.display().to_string())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# t[s] x[m] y[m] z[m] roll[rad] pitch[rad] yaw[rad]\n");
        for w in &self.waypoints {
            let a = w.pose.to_array();
            let _ = writeln!(out, "{} {} {} {} {} {} {}", w.time, a[0], a[1], a[2], a[3], a[4], a[5]);
        }
        out
    }
}

/// Pose at `t` on `traj`.
pub fn sample_trajectory(traj: &Trajectory, t: f64) -> Pose {
    traj.sample(t)
}

const EYE_RADIUS: f64 = 0.15;
const EYE_HORIZONTAL: f64 = 0.35;
const EYE_VERTICAL: f64 = 0.30;
const MOUTH_RADIUS: f64 = 0.6;
const MOUTH_SPAN: f64 = 2.0 * PI / 3.0;
const CIRCLE_POINTS: usize = 72;
const MOUTH_POINTS: usize = 48;

/// In-plane offset of the first smiley waypoint from the face center, in
/// units of the face radius: the bottom of the left eye.
fn smiley_start_offset() -> (f64, f64) {
    (-EYE_HORIZONTAL, EYE_VERTICAL - EYE_RADIUS)
}

/// Smiley face drawn in the vertical world plane through `center` spanned by
/// +y (horizontal) and +z (vertical), at constant orientation.
///
/// Feature order: left eye (full circle from its lowest point), straight
/// transit, right eye, straight transit, mouth arc (120 deg, radius
/// 0.6 * `radius`, centered below the face center). Eyes have radius
/// 0.15 * `radius` and sit 0.35 * `radius` left/right and 0.3 * `radius`
/// above the center. Waypoint times follow arc length, so speed is uniform
/// over the whole drawing.
pub fn smiley_trajectory(center: &Pose, radius: f64, duration: f64) -> Result<Trajectory> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidTrajectory(format!("radius must be positive, got {radius}")));
    }
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::InvalidTrajectory(format!("duration must be positive, got {duration}")));
    }
    // In-plane points (horizontal, vertical) in units of radius.
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let circle = |cx: f64, cy: f64, out: &mut Vec<(f64, f64)>| {
        for k in 0..=CIRCLE_POINTS {
            let a = -PI / 2.0 + 2.0 * PI * k as f64 / CIRCLE_POINTS as f64;
            out.push((cx + EYE_RADIUS * a.cos(), cy + EYE_RADIUS * a.sin()));
        }
    };
    circle(-EYE_HORIZONTAL, EYE_VERTICAL, &mut pts);
    circle(EYE_HORIZONTAL, EYE_VERTICAL, &mut pts);
    let mouth_start = 1.5 * PI - MOUTH_SPAN / 2.0;
    for k in 0..=MOUTH_POINTS {
        let a = mouth_start + MOUTH_SPAN * k as f64 / MOUTH_POINTS as f64;
        pts.push((MOUTH_RADIUS * a.cos(), MOUTH_RADIUS * a.sin()));
    }

    let horizontal = Vector3::y();
    let vertical = Vector3::z();
    let positions: Vec<Vector3<f64>> = pts
        .iter()
        .map(|(h, v)| center.position + horizontal * (h * radius) + vertical * (v * radius))
        .collect();

    let mut arc = Vec::with_capacity(positions.len());
    let mut s = 0.0;
    arc.push(0.0);
    for w in positions.windows(2) {
        s += (w[1] - w[0]).norm();
        arc.push(s);
    }
    let total = s;
    let waypoints = positions
        .iter()
        .zip(&arc)
        .map(|(p, s)| Waypoint {
            time: duration * s / total,
            pose: Pose::new(*p, center.orientation),
        })
        .collect();
    Trajectory::new(waypoints)
}

/// Face center that makes [`smiley_trajectory`] begin exactly at `start`.
pub fn smiley_center_for_start(start: &Pose, radius: f64) -> Pose {
    let (h, v) = smiley_start_offset();
    Pose::new(
        start.position - Vector3::y() * (h * radius) - Vector3::z() * (v * radius),
        start.orientation,
    )
}
