//! TOML run configuration and `key=value` overrides.
//!
//! ```toml
//! name = "wide-face"          # output stem, defaults to the scenario name
//! scenario = "reflection"     # preset attack, default nominal
//! model = "lrmate-like"       # built-in name or path to a model file
//! q0_deg = [0, -10, 10, 0, 0, 0]
//! dt = 0.01
//! duration = 60.0
//! smiley_radius = 0.1
//! attack = "attack.txt"       # replaces the preset attack
//! trajectory = "path.txt"     # replaces the default smiley
//!
//! [controller]
//! kp = 5.0                    # or six per-axis gains
//!
//! [detector]
//! k1 = 10.0
//! k2 = 200.0
//! s_gain = 50.0
//! epsilon = 0.01
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use fdia_core::attacks::{default_initial_posture, parse_attack_pair, preset_scenario, AttackPair, ScenarioKind};
use fdia_core::controller::{ControllerGains, Trajectory};
use fdia_core::detector::DetectorGains;
use fdia_core::kinematics::RobotModel;
use fdia_core::simulator::{default_smiley, SimConfig, DEFAULT_DT, DEFAULT_DURATION, DEFAULT_SMILEY_RADIUS};
use fdia_core::JointVector;

use crate::Failure;

/// Keys accepted by `--set`.
pub const OVERRIDE_KEYS: [&str; 9] =
    ["dt", "duration", "kp", "k1", "k2", "s_gain", "epsilon", "radius", "scenario"];

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: Option<String>,
    pub scenario: Option<String>,
    pub model: Option<String>,
    pub q0_deg: Option<Vec<f64>>,
    pub dt: Option<f64>,
    pub duration: Option<f64>,
    pub smiley_radius: Option<f64>,
    pub attack: Option<PathBuf>,
    pub trajectory: Option<PathBuf>,
    #[serde(default)]
    pub controller: ControllerSection,
    #[serde(default)]
    pub detector: DetectorSection,
    #[serde(skip)]
    base_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerSection {
    pub kp: Option<Gain>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Gain {
    Uniform(f64),
    PerAxis(Vec<f64>),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorSection {
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub s_gain: Option<f64>,
    pub epsilon: Option<f64>,
}

/// A fully resolved run.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub name: String,
    pub config: SimConfig,
}

impl RunConfig {
    pub fn parse(src: &str, origin: &str) -> Result<Self, Failure> {
        toml::from_str(src).map_err(|e| Failure::usage(format!("{origin}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let src = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&src, &path.display().to_string())?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        if cfg.name.is_none() {
            cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        Ok(cfg)
    }

    /// Applies one `key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<(), Failure> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("override `{assignment}` is not key=value")))?;
        let (key, value) = (key.trim(), value.trim());
        if key == "scenario" {
            self.scenario = Some(value.to_string());
            return Ok(());
        }
        let number: f64 = value
            .parse()
            .map_err(|_| Failure::usage(format!("override {key}: `{value}` is not a number")))?;
        match key {
            "dt" => self.dt = Some(number),
            "duration" => self.duration = Some(number),
            "kp" => self.controller.kp = Some(Gain::Uniform(number)),
            "k1" => self.detector.k1 = Some(number),
            "k2" => self.detector.k2 = Some(number),
            "s_gain" => self.detector.s_gain = Some(number),
            "epsilon" => self.detector.epsilon = Some(number),
            "radius" => self.smiley_radius = Some(number),
            _ => {
                return Err(Failure::usage(format!(
                    "unknown override key `{key}` (known: {})",
                    OVERRIDE_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    fn path(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }

    pub fn resolve(&self) -> Result<ResolvedRun, Failure> {
        let kind: ScenarioKind = self
            .scenario
            .as_deref()
            .unwrap_or("nominal")
            .parse()
            .map_err(Failure::from_core)?;

        let model = match self.model.as_deref() {
            None => RobotModel::lrmate_like(),
            Some(name) => match RobotModel::builtin(name) {
                Some(m) => m,
                None => RobotModel::load(&self.path(Path::new(name))).map_err(Failure::from_core)?,
            },
        };
        let n = model.dof();

        let q0 = match &self.q0_deg {
            Some(v) => JointVector::from_degrees(v),
            None if n == 6 => default_initial_posture(),
            None => JointVector::zeros(n),
        };
        if q0.len() != n {
            return Err(Failure::usage(format!("q0_deg has {} entries, model has {n} joints", q0.len())));
        }

        let dt = self.dt.unwrap_or(DEFAULT_DT);
        let duration = self.duration.unwrap_or(DEFAULT_DURATION);
        let radius = self.smiley_radius.unwrap_or(DEFAULT_SMILEY_RADIUS);

        let attack = match &self.attack {
            Some(p) => {
                let p = self.path(p);
                let src = fs::read_to_string(&p)
                    .map_err(|e| Failure::usage(format!("cannot read {}: {e}", p.display())))?;
                parse_attack_pair(&src, &p.display().to_string()).map_err(Failure::from_core)?
            }
            None if kind == ScenarioKind::Nominal => AttackPair::identity(n),
            None => preset_scenario(kind, &q0).map_err(Failure::from_core)?,
        };

        let trajectory = match &self.trajectory {
            Some(p) => Trajectory::load(&self.path(p)).map_err(Failure::from_core)?,
            None => default_smiley(&model, &q0, radius, duration).map_err(Failure::from_core)?,
        };

        let controller = match &self.controller.kp {
            None => ControllerGains::default(),
            Some(Gain::Uniform(k)) => ControllerGains::uniform(*k).map_err(Failure::from_core)?,
            Some(Gain::PerAxis(v)) => {
                let arr: [f64; 6] = v
                    .as_slice()
                    .try_into()
                    .map_err(|_| Failure::usage(format!("kp needs 1 or 6 values, got {}", v.len())))?;
                ControllerGains::per_axis(arr).map_err(Failure::from_core)?
            }
        };

        let d = DetectorGains::default();
        let detector = DetectorGains::new(
            self.detector.k1.unwrap_or(d.k1),
            self.detector.k2.unwrap_or(d.k2),
            self.detector.s_gain.unwrap_or(d.s_gain),
            self.detector.epsilon.unwrap_or(d.epsilon),
        )
        .map_err(Failure::from_core)?;

        let config = SimConfig {
            model,
            trajectory,
            attack,
            controller,
            detector,
            q0,
            dt,
            duration,
        };
        config.validate().map_err(Failure::from_core)?;
        let name = self.name.clone().unwrap_or_else(|| kind.name().to_string());
        Ok(ResolvedRun { name, config })
    }
}
