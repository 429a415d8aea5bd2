//! Affine false-data injections on the observable and command channels.
//!
//! The observable attack delivers `q~ = S_x q + d_x` to the controller and
//! the command attack delivers `u~ = S_u u + d_u` to the arm. With a
//! velocity-controlled arm (`q' = u~`) the controller sees
//!
//! ```text
//! q~' = S_x S_u u + S_x d_u
//! ```
//!
//! which is the nominal `q' = u` exactly when
//!
//! 1. `S_x S_u = I`,
//! 2. `q(0) = S_x q(0) + d_x`,
//! 3. `d_u = 0`.
//!
//! A pair meeting all three leaves the controller-side observables
//! identical to an unattacked run from the same start.

mod file;

pub use file::{parse_attack_pair, parse_matrix, write_attack_pair, AngleUnit};

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};
use crate::types::JointVector;

/// Default absolute tolerance for treating a condition as satisfied.
pub const DEFAULT_CONDITION_TOLERANCE: f64 = 1e-9;

/// Largest condition number of S_x the synthesizer accepts.
pub const DEFAULT_CONDITION_NUMBER_CAP: f64 = 1e12;

/// Initial posture used by every bundled scenario, degrees.
pub const INITIAL_POSTURE_DEG: [f64; 6] = [0.0, -10.0, 10.0, 0.0, 0.0, 0.0];

/// One channel's affine map `x -> S x + d`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineAttack {
    matrix: DMatrix<f64>,
    offset: DVector<f64>,
}

impl AffineAttack {
    pub fn new(matrix: DMatrix<f64>, offset: DVector<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                context: "attack matrix columns",
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        check_len("attack offset", matrix.nrows(), offset.len())?;
        if matrix.iter().chain(offset.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("attack matrix or offset".into()));
        }
        Ok(Self { matrix, offset })
    }

    /// The no-attack map.
    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n),
            offset: DVector::zeros(n),
        }
    }

    pub fn linear(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        Self::new(matrix, DVector::zeros(n))
    }

    pub fn scaling(n: usize, factor: f64) -> Self {
        Self {
            matrix: DMatrix::identity(n, n) * factor,
            offset: DVector::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn offset(&self) -> &DVector<f64> {
        &self.offset
    }

    pub fn with_offset(mut self, offset: DVector<f64>) -> Result<Self> {
        check_len("attack offset", self.dim(), offset.len())?;
        self.offset = offset;
        Ok(self)
    }

    /// `S x + d`.
    pub fn apply(&self, x: &JointVector) -> Result<JointVector> {
        check_len("attacked signal", self.dim(), x.len())?;
        Ok(JointVector::new(&self.matrix * &**x + &self.offset))
    }

    /// `[[S, d], [0, 1]]`.
    pub fn to_homogeneous(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut h = DMatrix::identity(n + 1, n + 1);
        h.view_mut((0, 0), (n, n)).copy_from(&self.matrix);
        h.view_mut((0, n), (n, 1)).copy_from(&self.offset);
        h
    }

    /// The composition `self(other(x))`.
    pub fn compose(&self, other: &AffineAttack) -> Result<AffineAttack> {
        check_len("attack composition", self.dim(), other.dim())?;
        Ok(AffineAttack {
            matrix: &self.matrix * &other.matrix,
            offset: &self.matrix * &other.offset + &self.offset,
        })
    }
}

/// Observable attack: `q~ = S_x q + d_x`.
pub fn apply_observable_attack(q: &JointVector, attack: &AffineAttack) -> Result<JointVector> {
    attack.apply(q)
}

/// Command attack: `u~ = S_u u + d_u`.
pub fn apply_command_attack(u: &JointVector, attack: &AffineAttack) -> Result<JointVector> {
    attack.apply(u)
}

pub fn to_homogeneous(attack: &AffineAttack) -> DMatrix<f64> {
    attack.to_homogeneous()
}

/// A coordinated attack on both channels.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackPair {
    pub observable: AffineAttack,
    pub command: AffineAttack,
    pub label: String,
}

impl AttackPair {
    pub fn new(observable: AffineAttack, command: AffineAttack, label: impl Into<String>) -> Result<Self> {
        check_len("attack pair", observable.dim(), command.dim())?;
        Ok(Self {
            observable,
            command,
            label: label.into(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            observable: AffineAttack::identity(n),
            command: AffineAttack::identity(n),
            label: "nominal".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.observable.dim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Undetectable,
    Detectable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Undetectable => "undetectable",
            Verdict::Detectable => "detectable",
        })
    }
}

/// Max-norm residuals of the three undetectability conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    /// `||S_x S_u - I||_max`.
    pub cond1_residual: f64,
    /// `||S_x q(0) + d_x - q(0)||_max`, rad.
    pub cond2_residual: f64,
    /// `||d_u||_max`.
    pub cond3_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl ConditionReport {
    pub fn is_undetectable(&self) -> bool {
        self.verdict == Verdict::Undetectable
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |r: f64| if r <= self.tolerance { "ok" } else { "VIOLATED" };
        writeln!(f, "condition 1  ||S_x S_u - I||_max        = {:.6e}  {}", self.cond1_residual, mark(self.cond1_residual))?;
        writeln!(
            f,
            "condition 2  ||S_x q0 + d_x - q0||_max   = {:.6e} rad ({:.6} deg)  {}",
            self.cond2_residual,
            self.cond2_residual.to_degrees(),
            mark(self.cond2_residual)
        )?;
        writeln!(f, "condition 3  ||d_u||_max                 = {:.6e}  {}", self.cond3_residual, mark(self.cond3_residual))?;
        writeln!(f, "tolerance    {:e}", self.tolerance)?;
        write!(f, "verdict      {}", self.verdict)
    }
}

fn max_abs<'a>(values: impl IntoIterator<Item = &'a f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Evaluates the undetectability conditions for `pair` started at `q0`.
pub fn check_conditions(pair: &AttackPair, q0: &JointVector, tol: f64) -> Result<ConditionReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!("tolerance must be positive, got {tol}")));
    }
    let n = pair.dim();
    check_len("initial posture", n, q0.len())?;
    let s_x = pair.observable.matrix();
    let s_u = pair.command.matrix();

    let cond1 = max_abs((s_x * s_u - DMatrix::<f64>::identity(n, n)).iter());
    let cond2 = max_abs((s_x * &**q0 + pair.observable.offset() - &**q0).iter());
    let cond3 = max_abs(pair.command.offset().iter());
    let verdict = if cond1 <= tol && cond2 <= tol && cond3 <= tol {
        Verdict::Undetectable
    } else {
        Verdict::Detectable
    };
    Ok(ConditionReport {
        cond1_residual: cond1,
        cond2_residual: cond2,
        cond3_residual: cond3,
        tolerance: tol,
        verdict,
    })
}

/// 2-norm condition number from the singular values; infinite when singular.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Builds the undetectable pair for a chosen observable matrix:
/// `S_u = S_x^-1`, `d_x = (I - S_x) q0`, `d_u = 0`.
pub fn synthesize_undetectable(s_x: &DMatrix<f64>, q0: &JointVector) -> Result<AttackPair> {
    synthesize_undetectable_with_cap(s_x, q0, DEFAULT_CONDITION_NUMBER_CAP)
}

pub fn synthesize_undetectable_with_cap(
    s_x: &DMatrix<f64>,
    q0: &JointVector,
    condition_cap: f64,
) -> Result<AttackPair> {
    if !s_x.is_square() {
        return Err(Error::DimensionMismatch {
            context: "S_x columns",
            expected: s_x.nrows(),
            actual: s_x.ncols(),
        });
    }
    let n = s_x.nrows();
    check_len("initial posture", n, q0.len())?;
    if s_x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("S_x".into()));
    }
    let condition = condition_number(s_x);
    if !(condition <= condition_cap) {
        return Err(Error::NotInvertible {
            condition,
            cap: condition_cap,
        });
    }
    let s_u = s_x.clone().lu().try_inverse().ok_or(Error::NotInvertible {
        condition,
        cap: condition_cap,
    })?;
    let d_x = (DMatrix::<f64>::identity(n, n) - s_x) * &**q0;
    AttackPair::new(
        AffineAttack::new(s_x.clone(), d_x)?,
        AffineAttack::linear(s_u)?,
        "synthesized",
    )
}

/// The five bundled experiment configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    Nominal,
    Detectable,
    Scaling,
    Reflection,
    Shear,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::Nominal,
        ScenarioKind::Detectable,
        ScenarioKind::Scaling,
        ScenarioKind::Reflection,
        ScenarioKind::Shear,
    ];

    /// The three coordinated, undetectable scenarios.
    pub const COORDINATED: [ScenarioKind; 3] =
        [ScenarioKind::Scaling, ScenarioKind::Reflection, ScenarioKind::Shear];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Nominal => "nominal",
            ScenarioKind::Detectable => "detectable",
            ScenarioKind::Scaling => "scaling",
            ScenarioKind::Reflection => "reflection",
            ScenarioKind::Shear => "shear",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nominal" => Ok(ScenarioKind::Nominal),
            "detectable" => Ok(ScenarioKind::Detectable),
            "scaling" | "scenario1" => Ok(ScenarioKind::Scaling),
            "reflection" | "scenario2" => Ok(ScenarioKind::Reflection),
            "shear" | "scenario3" => Ok(ScenarioKind::Shear),
            _ => Err(Error::UnknownScenario(s.to_string())),
        }
    }
}

const SCENARIO_DOF: usize = 6;

/// Upper-bidiagonal shear with unit diagonal and unit superdiagonal.
pub fn shear_observable_matrix() -> DMatrix<f64> {
    DMatrix::from_fn(SCENARIO_DOF, SCENARIO_DOF, |i, j| {
        if j == i || j == i + 1 {
            1.0
        } else {
            0.0
        }
    })
}

/// Upper-triangular alternating-sign matrix paired with the shear.
pub fn shear_command_matrix() -> DMatrix<f64> {
    DMatrix::from_fn(SCENARIO_DOF, SCENARIO_DOF, |i, j| {
        if j < i {
            0.0
        } else if (j - i) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    })
}

fn deg_vector(values: [f64; SCENARIO_DOF]) -> DVector<f64> {
    DVector::from_iterator(SCENARIO_DOF, values.iter().map(|v| v.to_radians()))
}

/// The configurations exactly as listed with the experiments, including the
/// listed observable offsets. For scaling and shear those offsets do not
/// satisfy Condition 2 at [`INITIAL_POSTURE_DEG`]; see [`preset_scenario`].
pub fn printed_scenario(kind: ScenarioKind) -> AttackPair {
    let n = SCENARIO_DOF;
    let eye = DMatrix::<f64>::identity(n, n);
    let zero = DVector::<f64>::zeros(n);
    let (s_x, d_x, s_u) = match kind {
        ScenarioKind::Nominal => (eye.clone(), zero.clone(), eye),
        ScenarioKind::Detectable => (
            eye.clone(),
            deg_vector([0.0, 30.0, -30.0, 0.0, 0.0, 0.0]),
            eye * 0.25,
        ),
        ScenarioKind::Scaling => (
            &eye * 0.25,
            deg_vector([0.0, 30.0, -30.0, 0.0, 0.0, 0.0]),
            eye * 4.0,
        ),
        ScenarioKind::Reflection => (
            -&eye,
            deg_vector([0.0, -20.0, 20.0, 0.0, 0.0, 0.0]),
            -eye,
        ),
        ScenarioKind::Shear => (
            shear_observable_matrix(),
            deg_vector([-20.0, 10.0, 0.0, 0.0, 0.0, 0.0]),
            shear_command_matrix(),
        ),
    };
    AttackPair {
        observable: AffineAttack { matrix: s_x, offset: d_x },
        command: AffineAttack { matrix: s_u, offset: zero },
        label: kind.name().to_string(),
    }
}

/// Scenario attack pair started from `q0`.
///
/// Nominal and detectable are returned as listed. The coordinated scenarios
/// keep the listed `S_x` and `S_u` and recompute `d_x = (I - S_x) q0` so all
/// three conditions hold; for reflection at the default posture this
/// reproduces the listed offset.
pub fn preset_scenario(kind: ScenarioKind, q0: &JointVector) -> Result<AttackPair> {
    check_len("scenario initial posture", SCENARIO_DOF, q0.len())?;
    let printed = printed_scenario(kind);
    match kind {
        ScenarioKind::Nominal | ScenarioKind::Detectable => Ok(printed),
        ScenarioKind::Scaling | ScenarioKind::Reflection | ScenarioKind::Shear => {
            let d_x = (DMatrix::<f64>::identity(SCENARIO_DOF, SCENARIO_DOF) - printed.observable.matrix())
                * &**q0;
            Ok(AttackPair {
                observable: printed.observable.with_offset(d_x)?,
                command: printed.command,
                label: printed.label,
            })
        }
    }
}

/// [`INITIAL_POSTURE_DEG`] in radians.
pub fn default_initial_posture() -> JointVector {
    JointVector::from_degrees(&INITIAL_POSTURE_DEG)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn q0() -> JointVector {
        default_initial_posture()
    }

    fn deg(v: &[f64]) -> JointVector {
        JointVector::from_degrees(v)
    }

    #[test]
    fn identity_attack_is_noop() {
        let q = JointVector::from_slice(&[0.3, -1.0, 2.0]);
        let a = AffineAttack::identity(3);
        assert_eq!(apply_observable_attack(&q, &a).unwrap(), q);
        assert_eq!(apply_command_attack(&q, &a).unwrap(), q);
    }

    #[test]
    fn reflection_fixes_initial_posture() {
        let pair = printed_scenario(ScenarioKind::Reflection);
        let out = apply_observable_attack(&q0(), &pair.observable).unwrap();
        assert_abs_diff_eq!(*out, *q0(), epsilon = 1e-15);
    }

    #[test]
    fn scalar_scaling() {
        let a = AffineAttack::scaling(6, 0.25);
        let q = JointVector::from_slice(&[4.0; 6]);
        assert_eq!(*a.apply(&q).unwrap(), *JointVector::from_slice(&[1.0; 6]));
    }

    #[test]
    fn command_attacks() {
        let u = JointVector::from_slice(&[0.1; 6]);
        let pair = printed_scenario(ScenarioKind::Scaling);
        let out = apply_command_attack(&u, &pair.command).unwrap();
        assert_abs_diff_eq!(*out, *JointVector::from_slice(&[0.4; 6]), epsilon = 1e-15);

        let offset = AffineAttack::new(
            DMatrix::identity(6, 6),
            DVector::from_column_slice(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
        )
        .unwrap();
        let out = apply_command_attack(&JointVector::zeros(6), &offset).unwrap();
        assert_eq!(out.as_slice(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn dimension_errors() {
        let a = AffineAttack::identity(3);
        assert!(a.apply(&JointVector::zeros(2)).is_err());
        assert!(AffineAttack::new(DMatrix::zeros(2, 3), DVector::zeros(2)).is_err());
        assert!(AffineAttack::new(DMatrix::zeros(2, 2), DVector::zeros(3)).is_err());
        assert!(AttackPair::new(AffineAttack::identity(2), AffineAttack::identity(3), "x").is_err());
    }

    #[test]
    fn homogeneous_identity() {
        assert_eq!(AffineAttack::identity(4).to_homogeneous(), DMatrix::identity(5, 5));
    }

    #[test]
    fn homogeneous_reflection_layout() {
        let pair = printed_scenario(ScenarioKind::Reflection);
        let h = to_homogeneous(&pair.observable);
        assert_eq!(h.nrows(), 7);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(h[(i, j)], if i == j { -1.0 } else { 0.0 });
            }
            assert_eq!(h[(i, 6)], pair.observable.offset()[i]);
            assert_eq!(h[(6, i)], 0.0);
        }
        assert_eq!(h[(6, 6)], 1.0);
        assert_abs_diff_eq!(h[(1, 6)], (-20f64).to_radians(), epsilon = 1e-16);
    }

    #[test]
    fn identity_pair_conditions() {
        let q = JointVector::from_slice(&[0.5, -0.2, 1.0, 0.0, 0.3, 2.0]);
        let r = check_conditions(&AttackPair::identity(6), &q, 1e-9).unwrap();
        assert_eq!(r.cond1_residual, 0.0);
        assert_eq!(r.cond2_residual, 0.0);
        assert_eq!(r.cond3_residual, 0.0);
        assert!(r.is_undetectable());
    }

    #[test]
    fn reflection_conditions_hold_exactly() {
        let r = check_conditions(&printed_scenario(ScenarioKind::Reflection), &q0(), 1e-9).unwrap();
        assert_eq!(r.cond1_residual, 0.0);
        assert_eq!(r.cond2_residual, 0.0);
        assert_eq!(r.cond3_residual, 0.0);
        assert_eq!(r.verdict, Verdict::Undetectable);
    }

    #[test]
    fn detectable_trial_residuals() {
        let r = check_conditions(&printed_scenario(ScenarioKind::Detectable), &q0(), 1e-9).unwrap();
        assert_abs_diff_eq!(r.cond1_residual, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(r.cond2_residual, 30f64.to_radians(), epsilon = 1e-15);
        assert_eq!(r.cond3_residual, 0.0);
        assert_eq!(r.verdict, Verdict::Detectable);
    }

    #[test]
    fn printed_offsets_violate_condition_two() {
        let r = check_conditions(&printed_scenario(ScenarioKind::Scaling), &q0(), 1e-9).unwrap();
        assert_abs_diff_eq!(r.cond1_residual, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.cond2_residual, 37.5f64.to_radians(), epsilon = 1e-14);
        assert_eq!(r.verdict, Verdict::Detectable);

        let r = check_conditions(&printed_scenario(ScenarioKind::Shear), &q0(), 1e-9).unwrap();
        assert_eq!(r.cond1_residual, 0.0);
        assert_abs_diff_eq!(r.cond2_residual, 30f64.to_radians(), epsilon = 1e-14);
        assert_eq!(r.verdict, Verdict::Detectable);
    }

    #[test]
    fn check_rejects_bad_inputs() {
        let pair = AttackPair::identity(6);
        assert!(check_conditions(&pair, &q0(), 0.0).is_err());
        assert!(check_conditions(&pair, &JointVector::zeros(3), 1e-9).is_err());
    }

    #[test]
    fn synthesize_reflection_matches_listing() {
        let pair = synthesize_undetectable(&-DMatrix::<f64>::identity(6, 6), &q0()).unwrap();
        let printed = printed_scenario(ScenarioKind::Reflection);
        assert_abs_diff_eq!(*pair.observable.offset(), *printed.observable.offset(), epsilon = 1e-15);
        assert_abs_diff_eq!(*pair.command.matrix(), -DMatrix::<f64>::identity(6, 6), epsilon = 1e-15);
        assert_eq!(pair.command.offset(), &DVector::zeros(6));
        assert_abs_diff_eq!(
            pair.observable.offset().map(f64::to_degrees),
            DVector::from_column_slice(&[0.0, -20.0, 20.0, 0.0, 0.0, 0.0]),
            epsilon = 1e-12
        );
    }

    #[test]
    fn synthesize_identity() {
        let q = JointVector::from_slice(&[0.1, 0.2, 0.3]);
        let pair = synthesize_undetectable(&DMatrix::identity(3, 3), &q).unwrap();
        assert_eq!(pair.observable.offset(), &DVector::zeros(3));
        assert_eq!(pair.command.matrix(), &DMatrix::identity(3, 3));
    }

    #[test]
    fn synthesize_quarter_scaling() {
        let pair = synthesize_undetectable(&(DMatrix::<f64>::identity(6, 6) * 0.25), &q0()).unwrap();
        assert_abs_diff_eq!(
            pair.observable.offset().map(f64::to_degrees),
            DVector::from_column_slice(&[0.0, -7.5, 7.5, 0.0, 0.0, 0.0]),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(*pair.command.matrix(), DMatrix::<f64>::identity(6, 6) * 4.0, epsilon = 1e-14);
    }

    #[test]
    fn synthesize_rejects_singular() {
        let mut s = DMatrix::<f64>::identity(6, 6);
        s[(3, 3)] = 0.0;
        assert!(matches!(
            synthesize_undetectable(&s, &q0()),
            Err(Error::NotInvertible { .. })
        ));
        let mut s = DMatrix::<f64>::identity(2, 2);
        s[(0, 1)] = 1.0;
        s[(1, 0)] = 1.0;
        s[(1, 1)] = 1.0;
        assert!(synthesize_undetectable(&s, &JointVector::zeros(2)).is_err());
    }

    #[test]
    fn shear_printed_matrices_are_inverse() {
        let prod = shear_observable_matrix() * shear_command_matrix();
        assert_eq!(prod, DMatrix::identity(6, 6));
    }

    #[test]
    fn presets() {
        assert_eq!(preset_scenario(ScenarioKind::Nominal, &q0()).unwrap(), AttackPair::identity(6));
        let refl = preset_scenario(ScenarioKind::Reflection, &q0()).unwrap();
        assert_eq!(refl, printed_scenario(ScenarioKind::Reflection));
        for kind in ScenarioKind::COORDINATED {
            let pair = preset_scenario(kind, &q0()).unwrap();
            let r = check_conditions(&pair, &q0(), 1e-9).unwrap();
            assert!(r.is_undetectable(), "{kind}: {r}");
        }
        let shear = preset_scenario(ScenarioKind::Shear, &q0()).unwrap();
        assert_abs_diff_eq!(
            shear.observable.offset().map(f64::to_degrees),
            DVector::from_column_slice(&[10.0, -10.0, 0.0, 0.0, 0.0, 0.0]),
            epsilon = 1e-12
        );
        assert!(preset_scenario(ScenarioKind::Shear, &JointVector::zeros(2)).is_err());
    }

    #[test]
    fn scenario_names_parse() {
        for kind in ScenarioKind::ALL {
            assert_eq!(kind.name().parse::<ScenarioKind>().unwrap(), kind);
        }
        assert_eq!("scenario3".parse::<ScenarioKind>().unwrap(), ScenarioKind::Shear);
        assert!(matches!("rotation".parse::<ScenarioKind>(), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn composition_matches_sequential_application() {
        let a = printed_scenario(ScenarioKind::Shear).observable;
        let b = printed_scenario(ScenarioKind::Reflection).observable;
        let q = deg(&[5.0, -3.0, 2.0, 1.0, 0.0, 7.0]);
        let direct = a.apply(&b.apply(&q).unwrap()).unwrap();
        let composed = a.compose(&b).unwrap().apply(&q).unwrap();
        assert_abs_diff_eq!(*direct, *composed, epsilon = 1e-15);
    }
}
