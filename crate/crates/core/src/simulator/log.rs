//! Per-step simulation record and its CSV form.
//!
//! CSV layout, one row per step, `n` = joint count:
//!
//! ```text
//! t[s], q1[rad]..qn[rad], q_tilde1[rad].., u1[rad/s].., u_tilde1[rad/s]..,
//! r_x[m], r_y[m], r_z[m], r_roll[rad], r_pitch[rad], r_yaw[rad],
//! r_prime_*, r_d_*, r_hat_* (same six suffixes), beta_hat, clamped
//! ```
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which round
//! trips every f64 exactly. `clamped` is 0 or 1.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::types::{JointVector, Pose};

#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub t: f64,
    /// True joint angles.
    pub q: JointVector,
    /// Joint angles delivered to the controller.
    pub q_tilde: JointVector,
    /// Command issued by the controller.
    pub u: JointVector,
    /// Command executed by the arm, after attack and limit projection.
    pub u_tilde: JointVector,
    /// `f(q)`, the actual pose.
    pub r: Pose,
    /// `f(q_tilde)`, the pose the controller believes.
    pub r_prime: Pose,
    pub r_d: Pose,
    /// Detector observer state entering this step.
    pub r_hat: Pose,
    /// Detector estimate entering this step.
    pub beta_hat: f64,
    /// The limit projection changed the command.
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimLog {
    label: String,
    dt: f64,
    rows: Vec<LogRow>,
}

const POSE_SUFFIXES: [&str; 6] = ["x[m]", "y[m]", "z[m]", "roll[rad]", "pitch[rad]", "yaw[rad]"];
const POSE_PREFIXES: [&str; 4] = ["r", "r_prime", "r_d", "r_hat"];
const JOINT_GROUPS: [(&str, &str); 4] = [
    ("q", "rad"),
    ("q_tilde", "rad"),
    ("u", "rad/s"),
    ("u_tilde", "rad/s"),
];

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl SimLog {
    pub fn new(label: String, dt: f64, rows: Vec<LogRow>) -> Self {
        Self { label, dt, rows }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn rows(&self) -> &[LogRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dof(&self) -> usize {
        self.rows.first().map(|r| r.q.len()).unwrap_or(0)
    }

    pub fn last(&self) -> Option<&LogRow> {
        self.rows.last()
    }

    /// `beta_hat` at the end of the horizon.
    pub fn final_beta_hat(&self) -> Option<f64> {
        self.last().map(|r| r.beta_hat)
    }

    pub fn any_clamped(&self) -> bool {
        self.rows.iter().any(|r| r.clamped)
    }

    pub fn header(n: usize) -> Vec<String> {
        let mut h = vec!["t[s]".to_string()];
        for (name, unit) in JOINT_GROUPS {
            h.extend((1..=n).map(|i| format!("{name}{i}[{unit}]")));
        }
        for prefix in POSE_PREFIXES {
            h.extend(POSE_SUFFIXES.iter().map(|s| format!("{prefix}_{s}")));
        }
        h.push("beta_hat".into());
        h.push("clamped".into());
        h
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(Self::header(self.dof()))?;
        for row in &self.rows {
            let mut rec: Vec<String> = Vec::with_capacity(2 + 4 * row.q.len() + 24);
            rec.push(fmt_f64(row.t));
            for v in [&row.q, &row.q_tilde, &row.u, &row.u_tilde] {
                rec.extend(v.iter().map(|x| fmt_f64(*x)));
            }
            for p in [&row.r, &row.r_prime, &row.r_d, &row.r_hat] {
                rec.extend(p.to_array().iter().map(|x| fmt_f64(*x)));
            }
            rec.push(fmt_f64(row.beta_hat));
            rec.push(if row.clamped { "1" } else { "0" }.into());
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is ascii"))
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Reads a log written by [`SimLog::write_csv`]. The grid step is taken
    /// from the first two time stamps.
    pub fn read_csv<R: Read>(reader: R, label: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers()?.clone();
        let width = headers.len();
        // 1 + 4n + 24 + 2 columns.
        if width < 31 || (width - 27) % 4 != 0 {
            return Err(Error::parse(label, 1, format!("unexpected column count {width}")));
        }
        let n = (width - 27) / 4;
        let expected = Self::header(n);
        if let Some((i, (got, want))) = headers
            .iter()
            .zip(&expected)
            .enumerate()
            .find(|(_, (g, w))| g != w)
        {
            return Err(Error::parse(label, 1, format!("column {i}: expected `{want}`, found `{got}`")));
        }

        let mut rows = Vec::new();
        for (idx, rec) in rdr.records().enumerate() {
            let lineno = idx + 2;
            let rec = rec?;
            if rec.len() != width {
                return Err(Error::parse(label, lineno, "ragged row"));
            }
            let num = |i: usize| -> Result<f64> {
                rec[i]
                    .parse::<f64>()
                    .map_err(|_| Error::parse(label, lineno, format!("bad number `{}`", &rec[i])))
            };
            let joint = |start: usize| -> Result<JointVector> {
                (start..start + n).map(num).collect::<Result<Vec<_>>>().map(JointVector::from)
            };
            let pose = |start: usize| -> Result<Pose> {
                let mut a = [0.0; 6];
                for (k, slot) in a.iter_mut().enumerate() {
                    *slot = num(start + k)?;
                }
                Ok(Pose::from_array(a))
            };
            let base = 1 + 4 * n;
            let clamped = match &rec[width - 1] {
                "0" => false,
                "1" => true,
                other => return Err(Error::parse(label, lineno, format!("bad clamp flag `{other}`"))),
            };
            rows.push(LogRow {
                t: num(0)?,
                q: joint(1)?,
                q_tilde: joint(1 + n)?,
                u: joint(1 + 2 * n)?,
                u_tilde: joint(1 + 3 * n)?,
                r: pose(base)?,
                r_prime: pose(base + 6)?,
                r_d: pose(base + 12)?,
                r_hat: pose(base + 18)?,
                beta_hat: num(base + 24)?,
                clamped,
            });
        }
        let dt = if rows.len() >= 2 { rows[1].t - rows[0].t } else { 0.0 };
        Ok(Self::new(label.to_string(), dt, rows))
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        Self::read_csv(std::io::BufReader::new(file), &label)
    }
}
