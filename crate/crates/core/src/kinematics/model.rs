//! Denavit-Hartenberg chains, joint limits and the plain-text model format.
//!
//! A model file is line oriented. `#` starts a comment. The first data line is
//! the header `joints <n> <deg|rad>`; the unit applies to every angle column
//! below it. Each of the following `n` lines describes one revolute joint:
//!
//! ```text
//! a  alpha  d  theta_offset  q_min  q_max  qd_max
//! ```
//!
//! `a` and `d` are in meters, `qd_max` in angle units per second. An optional
//! `name <word>` line may appear before the header.

use std::path::Path;

use crate::error::{Error, Result};

/// Standard (distal) DH parameters of one revolute joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DhJoint {
    /// Link length along x_i (m).
    pub a: f64,
    /// Link twist about x_i (rad).
    pub alpha: f64,
    /// Link offset along z_{i-1} (m).
    pub d: f64,
    /// Constant added to the joint variable (rad).
    pub theta_offset: f64,
}

/// A serial revolute chain.
#[derive(Debug, Clone, PartialEq)]
pub struct DhParams {
    joints: Vec<DhJoint>,
}

impl DhParams {
    pub fn new(joints: Vec<DhJoint>) -> Result<Self> {
        if joints.is_empty() {
            return Err(Error::InvalidModel("chain needs at least one joint".into()));
        }
        for (i, j) in joints.iter().enumerate() {
            if ![j.a, j.alpha, j.d, j.theta_offset]
                .iter()
                .all(|v| v.is_finite())
            {
                return Err(Error::InvalidModel(format!("joint {} has a non-finite entry", i + 1)));
            }
        }
        Ok(Self { joints })
    }

    pub fn joints(&self) -> &[DhJoint] {
        &self.joints
    }

    /// Joint count n.
    pub fn dof(&self) -> usize {
        self.joints.len()
    }
}

/// Displacement and velocity bounds of one joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointLimit {
    pub min: f64,
    pub max: f64,
    pub velocity_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointLimits {
    limits: Vec<JointLimit>,
}

impl JointLimits {
    pub fn new(limits: Vec<JointLimit>) -> Result<Self> {
        for (i, l) in limits.iter().enumerate() {
            if !(l.min.is_finite() && l.max.is_finite() && l.min < l.max) {
                return Err(Error::InvalidLimits(format!(
                    "joint {}: need finite min < max, got [{}, {}]",
                    i + 1,
                    l.min,
                    l.max
                )));
            }
            if !(l.velocity_max > 0.0) {
                return Err(Error::InvalidLimits(format!(
                    "joint {}: velocity max must be positive, got {}",
                    i + 1,
                    l.velocity_max
                )));
            }
        }
        Ok(Self { limits })
    }

    /// Symmetric limits `[-bound, bound]` on every joint.
    pub fn uniform(n: usize, bound: f64, velocity_max: f64) -> Result<Self> {
        Self::new(vec![
            JointLimit {
                min: -bound,
                max: bound,
                velocity_max,
            };
            n
        ])
    }

    pub fn len(&self) -> usize {
        self.limits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.limits.is_empty()
    }

    pub fn get(&self, i: usize) -> &JointLimit {
        &self.limits[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &JointLimit> {
        self.limits.iter()
    }

    /// True when every entry of `q` lies inside its displacement interval.
    pub fn contains(&self, q: &[f64]) -> bool {
        q.len() == self.limits.len()
            && q
                .iter()
                .zip(&self.limits)
                .all(|(v, l)| *v >= l.min && *v <= l.max)
    }
}

/// A named chain together with its limits.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotModel {
    pub name: String,
    pub dh: DhParams,
    pub limits: JointLimits,
}

const PLANAR2_SRC: &str = include_str!("../../models/planar2.dh");
const LRMATE_LIKE_SRC: &str = include_str!("../../models/lrmate_like.dh");

impl RobotModel {
    pub fn new(name: impl Into<String>, dh: DhParams, limits: JointLimits) -> Result<Self> {
        if dh.dof() != limits.len() {
            return Err(Error::InvalidModel(format!(
                "{} DH rows but {} joint limits",
                dh.dof(),
                limits.len()
            )));
        }
        Ok(Self {
            name: name.into(),
            dh,
            limits,
        })
    }

    pub fn dof(&self) -> usize {
        self.dh.dof()
    }

    /// Two-link planar test arm, unit link lengths.
    pub fn planar2() -> Self {
        Self::parse(PLANAR2_SRC, "planar2.dh").expect("bundled planar2 model parses")
    }

    /// Six-axis stand-in for a small industrial arm. Link dimensions are
    /// catalog-style approximations, not a calibrated model.
    pub fn lrmate_like() -> Self {
        Self::parse(LRMATE_LIKE_SRC, "lrmate_like.dh").expect("bundled lrmate-like model parses")
    }

    /// Looks up a bundled model by name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "planar2" => Some(Self::planar2()),
            "lrmate-like" | "lrmate_like" => Some(Self::lrmate_like()),
            _ => None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&src, &path.display().to_string())
    }

    pub fn parse(src: &str, origin: &str) -> Result<Self> {
        let mut name: Option<String> = None;
        let mut header: Option<(usize, f64)> = None;
        let mut joints = Vec::new();
        let mut limits = Vec::new();

        for (idx, raw) in src.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match (fields[0], header) {
                ("name", None) => {
                    if fields.len() != 2 {
                        return Err(Error::parse(origin, lineno, "expected `name <word>`"));
                    }
                    name = Some(fields[1].to_string());
                }
                ("joints", None) => {
                    if fields.len() != 3 {
                        return Err(Error::parse(origin, lineno, "expected `joints <n> <deg|rad>`"));
                    }
                    let n: usize = fields[1]
                        .parse()
                        .map_err(|_| Error::parse(origin, lineno, "joint count is not an integer"))?;
                    if n == 0 {
                        return Err(Error::parse(origin, lineno, "joint count must be at least 1"));
                    }
                    let scale = angle_scale(fields[2])
                        .ok_or_else(|| Error::parse(origin, lineno, "angle unit must be deg or rad"))?;
                    header = Some((n, scale));
                }
                (_, None) => {
                    return Err(Error::parse(origin, lineno, "joint row before `joints` header"));
                }
                (_, Some((n, scale))) => {
                    if joints.len() == n {
                        return Err(Error::parse(origin, lineno, format!("more than {n} joint rows")));
                    }
                    if fields.len() != 7 {
                        return Err(Error::parse(
                            origin,
                            lineno,
                            format!("expected 7 columns, found {}", fields.len()),
                        ));
                    }
                    let mut v = [0.0f64; 7];
                    for (slot, f) in v.iter_mut().zip(&fields) {
                        *slot = f
                            .parse()
                            .map_err(|_| Error::parse(origin, lineno, format!("bad number `{f}`")))?;
                    }
                    if v.iter().any(|x| !x.is_finite()) {
                        return Err(Error::parse(origin, lineno, "non-finite entry"));
                    }
                    joints.push(DhJoint {
                        a: v[0],
                        alpha: v[1] * scale,
                        d: v[2],
                        theta_offset: v[3] * scale,
                    });
                    limits.push(JointLimit {
                        min: v[4] * scale,
                        max: v[5] * scale,
                        velocity_max: v[6] * scale,
                    });
                }
            }
        }

        let (n, _) = header.ok_or_else(|| Error::parse(origin, 0, "missing `joints` header"))?;
        if joints.len() != n {
            return Err(Error::parse(
                origin,
                0,
                format!("header declares {n} joints, found {}", joints.len()),
            ));
        }
        let name = name.unwrap_or_else(|| origin.to_string());
        Self::new(name, DhParams::new(joints)?, JointLimits::new(limits)?)
    }
}

pub(crate) fn angle_scale(unit: &str) -> Option<f64> {
    match unit {
        "deg" => Some(std::f64::consts::PI / 180.0),
        "rad" => Some(1.0),
        _ => None,
    }
}
