//! Forward kinematics and Jacobians of revolute DH chains.
//!
//! The task-space map is `f(q) = [x, y, z, roll, pitch, yaw]`, a plain
//! R^6-valued function, so the Jacobian is the 6 x n matrix `df/dq`. Its
//! orientation rows are the geometric angular-velocity rows mapped into
//! roll-pitch-yaw rates.
//!
//! At pitch within [`GIMBAL_TOLERANCE`] of +-pi/2 roll and yaw are not
//! separable. There roll is reported as 0 and the whole rotation about the
//! vertical is folded into yaw; the Jacobian follows the same branch (roll
//! row zero, yaw row equal to the z angular velocity).

mod model;

pub use model::{DhJoint, DhParams, JointLimit, JointLimits, RobotModel};
pub(crate) use model::angle_scale;

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, Matrix3, Matrix4, Vector3};

use crate::error::{check_len, Error, Result};
use crate::types::{wrap_angle, JointVector, Pose};

/// Distance from +-pi/2 pitch below which the gimbal branch is taken.
pub const GIMBAL_TOLERANCE: f64 = 1e-8;

/// Homogeneous transform of one standard DH link: `Rz(theta) Tz(d) Tx(a) Rx(alpha)`.
pub fn link_transform(joint: &DhJoint, q: f64) -> Matrix4<f64> {
    let (st, ct) = (joint.theta_offset + q).sin_cos();
    let (sa, ca) = joint.alpha.sin_cos();
    Matrix4::new(
        ct, -st * ca, st * sa, joint.a * ct,
        st, ct * ca, -ct * sa, joint.a * st,
        0.0, sa, ca, joint.d,
        0.0, 0.0, 0.0, 1.0,
    )
}

/// Base-to-frame transforms `T_0 .. T_n`, with `T_0 = I`.
pub fn frames(q: &JointVector, model: &DhParams) -> Result<Vec<Matrix4<f64>>> {
    check_len("joint vector", model.dof(), q.len())?;
    let mut out = Vec::with_capacity(model.dof() + 1);
    let mut t = Matrix4::identity();
    out.push(t);
    for (joint, qi) in model.joints().iter().zip(q.iter()) {
        t *= link_transform(joint, *qi);
        out.push(t);
    }
    Ok(out)
}

/// Roll-pitch-yaw of `R = Rz(yaw) Ry(pitch) Rx(roll)`, returned as `[roll, pitch, yaw]`.
pub fn rotation_to_rpy(r: &Matrix3<f64>) -> Vector3<f64> {
    let pitch = (-r[(2, 0)]).atan2((r[(0, 0)].powi(2) + r[(1, 0)].powi(2)).sqrt());
    if is_gimbal(pitch) {
        let yaw = (-r[(0, 1)]).atan2(r[(1, 1)]);
        Vector3::new(0.0, pitch, yaw)
    } else {
        let roll = r[(2, 1)].atan2(r[(2, 2)]);
        let yaw = r[(1, 0)].atan2(r[(0, 0)]);
        Vector3::new(roll, pitch, yaw)
    }
}

fn is_gimbal(pitch: f64) -> bool {
    (pitch - FRAC_PI_2).abs() < GIMBAL_TOLERANCE || (pitch + FRAC_PI_2).abs() < GIMBAL_TOLERANCE
}

fn pose_of(t: &Matrix4<f64>) -> Pose {
    let rot: Matrix3<f64> = t.fixed_view::<3, 3>(0, 0).into_owned();
    let pos: Vector3<f64> = t.fixed_view::<3, 1>(0, 3).into_owned();
    Pose::new(pos, rotation_to_rpy(&rot))
}

/// End-effector pose `r = f(q)`.
pub fn forward_kinematics(q: &JointVector, model: &DhParams) -> Result<Pose> {
    check_len("joint vector", model.dof(), q.len())?;
    let t = model
        .joints()
        .iter()
        .zip(q.iter())
        .fold(Matrix4::identity(), |acc, (joint, qi)| acc * link_transform(joint, *qi));
    Ok(pose_of(&t))
}

/// Analytic Jacobian `J(q) = df/dq`, 6 x n.
pub fn jacobian(q: &JointVector, model: &DhParams) -> Result<DMatrix<f64>> {
    let ts = frames(q, model)?;
    let n = model.dof();
    let end = &ts[n];
    let p_end: Vector3<f64> = end.fixed_view::<3, 1>(0, 3).into_owned();
    let rpy = pose_of(end).orientation;

    let mut jac = DMatrix::zeros(6, n);
    for i in 0..n {
        let z: Vector3<f64> = ts[i].fixed_view::<3, 1>(0, 2).into_owned();
        let p: Vector3<f64> = ts[i].fixed_view::<3, 1>(0, 3).into_owned();
        let v = z.cross(&(p_end - p));
        let rates = angular_to_rpy_rates(&z, &rpy);
        for k in 0..3 {
            jac[(k, i)] = v[k];
            jac[(k + 3, i)] = rates[k];
        }
    }
    Ok(jac)
}

/// Maps an angular velocity to `[roll, pitch, yaw]` rates at attitude `rpy`.
pub fn angular_to_rpy_rates(omega: &Vector3<f64>, rpy: &Vector3<f64>) -> Vector3<f64> {
    let (sp, cp) = rpy.y.sin_cos();
    let (sy, cy) = rpy.z.sin_cos();
    let pitch_rate = -sy * omega.x + cy * omega.y;
    if is_gimbal(rpy.y) {
        return Vector3::new(0.0, pitch_rate, omega.z);
    }
    let roll_rate = (cy * omega.x + sy * omega.y) / cp;
    Vector3::new(roll_rate, pitch_rate, omega.z + sp * roll_rate)
}

/// Central-difference Jacobian of [`forward_kinematics`] with step `h` (rad).
///
/// Orientation differences are taken along the shortest arc so a wrap at
/// +-pi does not show up as a 2pi/h spike.
pub fn numerical_jacobian(q: &JointVector, model: &DhParams, h: f64) -> Result<DMatrix<f64>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    check_len("joint vector", model.dof(), q.len())?;
    let n = model.dof();
    let mut jac = DMatrix::zeros(6, n);
    for i in 0..n {
        let mut plus = q.clone();
        plus[i] += h;
        let mut minus = q.clone();
        minus[i] -= h;
        let fp = forward_kinematics(&plus, model)?;
        let fm = forward_kinematics(&minus, model)?;
        let diff = fp.difference(&fm);
        for k in 0..6 {
            jac[(k, i)] = diff[k] / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Wrapped per-component difference of two RPY triples.
pub fn orientation_difference(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    (a - b).map(wrap_angle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn planar() -> DhParams {
        RobotModel::planar2().dh
    }

    #[test]
    fn planar_straight_arm() {
        let pose = forward_kinematics(&JointVector::from_slice(&[0.0, 0.0]), &planar()).unwrap();
        assert_abs_diff_eq!(pose.position, Vector3::new(2.0, 0.0, 0.0), epsilon = 1e-15);
        assert_abs_diff_eq!(pose.orientation, Vector3::zeros(), epsilon = 1e-15);
    }

    #[test]
    fn planar_rotated_arm() {
        let pose =
            forward_kinematics(&JointVector::from_slice(&[FRAC_PI_2, 0.0]), &planar()).unwrap();
        assert_abs_diff_eq!(pose.position, Vector3::new(0.0, 2.0, 0.0), epsilon = 1e-15);
        assert_abs_diff_eq!(pose.orientation.z, FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn planar_jacobian_straight() {
        let j = jacobian(&JointVector::from_slice(&[0.0, 0.0]), &planar()).unwrap();
        assert_abs_diff_eq!(j[(0, 0)], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(j[(1, 0)], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(j[(1, 1)], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(j[(5, 0)], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(j[(5, 1)], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn planar_numerical_matches_analytic() {
        let q = JointVector::from_slice(&[0.0, 0.0]);
        let a = jacobian(&q, &planar()).unwrap();
        let n = numerical_jacobian(&q, &planar(), 1e-6).unwrap();
        assert!((a - n).abs().max() <= 1e-8);
    }

    #[test]
    fn zero_chain_has_zero_jacobian() {
        let dh = DhParams::new(vec![
            DhJoint {
                a: 0.0,
                alpha: 0.0,
                d: 0.0,
                theta_offset: 0.0
            };
            3
        ])
        .unwrap();
        let q = JointVector::from_slice(&[0.3, -0.2, 0.1]);
        let n = numerical_jacobian(&q, &dh, 1e-6).unwrap();
        // Orientation about z is still joint driven; positions are not.
        for k in 0..3 {
            for i in 0..3 {
                assert_eq!(n[(k, i)], 0.0);
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let q = JointVector::from_slice(&[0.0]);
        assert!(matches!(
            forward_kinematics(&q, &planar()),
            Err(Error::DimensionMismatch { expected: 2, actual: 1, .. })
        ));
        assert!(jacobian(&q, &planar()).is_err());
        assert!(numerical_jacobian(&q, &planar(), 1e-6).is_err());
    }

    #[test]
    fn rejects_nonpositive_step() {
        let q = JointVector::from_slice(&[0.0, 0.0]);
        assert!(numerical_jacobian(&q, &planar(), 0.0).is_err());
    }

    #[test]
    fn rpy_round_trip_regular() {
        let (roll, pitch, yaw) = (0.3, -0.4, 2.9);
        let r = nalgebra::Rotation3::from_euler_angles(roll, pitch, yaw);
        let rpy = rotation_to_rpy(r.matrix());
        assert_abs_diff_eq!(rpy, Vector3::new(roll, pitch, yaw), epsilon = 1e-12);
    }

    #[test]
    fn rpy_gimbal_branch_folds_roll_into_yaw() {
        let r = nalgebra::Rotation3::from_euler_angles(0.2, FRAC_PI_2, 0.7);
        let rpy = rotation_to_rpy(r.matrix());
        assert_eq!(rpy.x, 0.0);
        assert_abs_diff_eq!(rpy.y, FRAC_PI_2, epsilon = 1e-7);
        assert_abs_diff_eq!(rpy.z, 0.5, epsilon = 1e-7);

        let r = nalgebra::Rotation3::from_euler_angles(0.2, -FRAC_PI_2, 0.7);
        let rpy = rotation_to_rpy(r.matrix());
        assert_eq!(rpy.x, 0.0);
        assert_abs_diff_eq!(rpy.z, 0.9, epsilon = 1e-7);
    }

    #[test]
    fn position_periodic_in_joint_angle() {
        let m = RobotModel::lrmate_like().dh;
        let q = JointVector::from_slice(&[0.1, -0.2, 0.3, 0.4, -0.5, 0.6]);
        let base = forward_kinematics(&q, &m).unwrap();
        for i in 0..6 {
            let mut q2 = q.clone();
            q2[i] += 2.0 * PI;
            let p = forward_kinematics(&q2, &m).unwrap();
            assert_abs_diff_eq!(p.position, base.position, epsilon = 1e-12);
        }
    }
}
