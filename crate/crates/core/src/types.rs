//! Joint-space and task-space value types shared by every module.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Deref, DerefMut};

use nalgebra::{DVector, Vector3, Vector6};

use crate::error::{Error, Result};

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// An n-vector of joint angles (rad) or joint velocities (rad/s).
///
/// Holds the true joint state `q`, the delivered observable `q~`, the
/// command `u` and the delivered command `u~`; which one is meant is a
/// matter of context.
#[derive(Debug, Clone, PartialEq)]
pub struct JointVector(DVector<f64>);

impl JointVector {
    pub fn new(values: DVector<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(DVector::zeros(n))
    }

    pub fn from_slice(values: &[f64]) -> Self {
        Self(DVector::from_column_slice(values))
    }

    /// Builds a joint vector from degrees, storing radians.
    pub fn from_degrees(values: &[f64]) -> Self {
        Self(DVector::from_iterator(
            values.len(),
            values.iter().map(|v| v.to_radians()),
        ))
    }

    pub fn to_degrees(&self) -> Vec<f64> {
        self.0.iter().map(|v| v.to_degrees()).collect()
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Returns an error naming `what` if any entry is NaN or infinite.
    pub fn ensure_finite(&self, what: &str) -> Result<()> {
        match self.0.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(i) => Err(Error::NonFinite(format!("{what}[{i}] = {}", self.0[i]))),
        }
    }
}

impl Deref for JointVector {
    type Target = DVector<f64>;

    fn deref(&self) -> &DVector<f64> {
        &self.0
    }
}

impl DerefMut for JointVector {
    fn deref_mut(&mut self) -> &mut DVector<f64> {
        &mut self.0
    }
}

impl From<DVector<f64>> for JointVector {
    fn from(v: DVector<f64>) -> Self {
        Self(v)
    }
}

impl From<Vec<f64>> for JointVector {
    fn from(v: Vec<f64>) -> Self {
        Self(DVector::from_vec(v))
    }
}

/// Task-space pose: XYZ position in meters and roll-pitch-yaw in radians.
///
/// The RPY convention is `R = Rz(yaw) * Ry(pitch) * Rx(roll)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Vector3<f64>,
    pub orientation: Vector3<f64>,
}

impl Pose {
    pub fn new(position: Vector3<f64>, orientation: Vector3<f64>) -> Self {
        Self {
            position,
            orientation,
        }
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self {
            position: Vector3::new(v[0], v[1], v[2]),
            orientation: Vector3::new(v[3], v[4], v[5]),
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.position.x,
            self.position.y,
            self.position.z,
            self.orientation.x,
            self.orientation.y,
            self.orientation.z,
        ]
    }

    pub fn from_vector6(v: &Vector6<f64>) -> Self {
        Self::from_array([v[0], v[1], v[2], v[3], v[4], v[5]])
    }

    pub fn to_vector6(&self) -> Vector6<f64> {
        Vector6::from_column_slice(&self.to_array())
    }

    /// `self - other` with orientation components taken along the shortest arc.
    pub fn difference(&self, other: &Pose) -> Vector6<f64> {
        let dp = self.position - other.position;
        let d_o = self.orientation - other.orientation;
        Vector6::new(
            dp.x,
            dp.y,
            dp.z,
            wrap_angle(d_o.x),
            wrap_angle(d_o.y),
            wrap_angle(d_o.z),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

impl fmt::Display for Pose {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.to_array();
        write!(
            f,
            "[{:.6}, {:.6}, {:.6} m | {:.6}, {:.6}, {:.6} rad]",
            a[0], a[1], a[2], a[3], a[4], a[5]
        )
    }
}
