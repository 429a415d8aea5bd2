//! Commands behind the `fdia` binary. Each returns a process exit status and
//! writes its report to the supplied streams.
//!
//! | status | meaning |
//! |--------|---------|
//! | 0 | success; for `check`, the pair is undetectable |
//! | 1 | `check` found a detectable pair, or the simulation failed |
//! | 2 | bad input: unknown scenario, bad override, unparseable file, grid mismatch |
//! | 3 | an output file could not be written |

pub mod config;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use fdia_core::attacks::{
    check_conditions, default_initial_posture, parse_attack_pair, parse_matrix, synthesize_undetectable,
    write_attack_pair, AngleUnit, DEFAULT_CONDITION_TOLERANCE,
};
use fdia_core::simulator::{compare_runs, compute_metrics, run_scenario, SimLog};
use fdia_core::{Error, JointVector};

pub use config::{ResolvedRun, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DETECTABLE: i32 = 1;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_WRITE: i32 = 3;

/// Threshold on `max |q~_a - q~_b|` for calling two runs observably equivalent, rad.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn write(path: &Path, err: impl fmt::Display) -> Self {
        Self {
            code: EXIT_WRITE,
            message: format!("cannot write {}: {err}", path.display()),
        }
    }

    /// Input-side core errors are usage errors; anything else failed mid-run.
    pub fn from_core(err: Error) -> Self {
        let code = match err {
            Error::NonFinite(_) | Error::LogTooShort(_) => EXIT_FAILURE,
            _ => EXIT_USAGE,
        };
        Self { code, message: err.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn finish(result: Result<i32, Failure>, err: &mut dyn Write) -> i32 {
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code
        }
    }
}

/// What `run` should simulate and where the files go.
#[derive(Debug, Clone, Default)]
pub struct RunSpec {
    pub scenario: Option<String>,
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub overrides: Vec<String>,
    pub dt: Option<f64>,
    pub duration: Option<f64>,
}

impl RunSpec {
    pub fn resolve(&self) -> Result<ResolvedRun, Failure> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(s) = &self.scenario {
            cfg.scenario = Some(s.clone());
        }
        for o in &self.overrides {
            cfg.set(o)?;
        }
        if let Some(dt) = self.dt {
            cfg.dt = Some(dt);
        }
        if let Some(d) = self.duration {
            cfg.duration = Some(d);
        }
        cfg.resolve()
    }
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// `key = value` summary of one run.
pub fn metrics_report(name: &str, log: &SimLog) -> Result<String, Failure> {
    let m = compute_metrics(log).map_err(Failure::from_core)?;
    let last = log.last().expect("non-empty log");
    let lines = [
        ("scenario", name.to_string()),
        ("samples", log.len().to_string()),
        ("dt_s", fmt17(log.dt())),
        ("duration_s", fmt17(last.t)),
        ("mean_observed_error_m", fmt17(m.mean_observed)),
        ("max_observed_error_m", fmt17(m.max_observed)),
        ("mean_actual_error_m", fmt17(m.mean_actual)),
        ("max_actual_error_m", fmt17(m.max_actual)),
        ("final_beta_hat", fmt17(last.beta_hat)),
        ("limit_clamped", log.any_clamped().to_string()),
    ];
    Ok(lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect())
}

/// Runs one simulation and writes `<name>.csv` and `<name>.metrics.txt`
/// into `spec.out`.
pub fn cmd_run(spec: &RunSpec, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| {
        let run = spec.resolve()?;
        let log = run_scenario(&run.config).map_err(Failure::from_core)?;
        fs::create_dir_all(&spec.out).map_err(|e| Failure::write(&spec.out, e))?;
        let csv_path = spec.out.join(format!("{}.csv", run.name));
        log.save_csv(&csv_path).map_err(|e| Failure::write(&csv_path, e))?;
        let metrics_path = spec.out.join(format!("{}.metrics.txt", run.name));
        let report = metrics_report(&run.name, &log)?;
        fs::write(&metrics_path, &report).map_err(|e| Failure::write(&metrics_path, e))?;
        let _ = writeln!(out, "wrote {}", csv_path.display());
        let _ = writeln!(out, "wrote {}", metrics_path.display());
        let _ = write!(out, "{report}");
        Ok(EXIT_OK)
    })();
    finish(result, err)
}

/// Error table for several logs plus pairwise observable-equivalence verdicts.
pub fn cmd_compare(paths: &[PathBuf], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = (|| {
        if paths.len() < 2 {
            return Err(Failure::usage("compare needs at least two CSV logs"));
        }
        let logs = paths
            .iter()
            .map(|p| SimLog::load_csv(p).map_err(Failure::from_core))
            .collect::<Result<Vec<_>, _>>()?;
        let width = logs.iter().map(|l| l.label().len()).max().unwrap_or(0).max(8);

        let mut text = String::new();
        text.push_str(&format!(
            "{:<width$}  {:>14}  {:>14}  {:>14}  {:>14}  {:>12}\n",
            "run", "mean_obs[m]", "max_obs[m]", "mean_act[m]", "max_act[m]", "beta_hat(T)"
        ));
        for log in &logs {
            let m = compute_metrics(log).map_err(Failure::from_core)?;
            text.push_str(&format!(
                "{:<width$}  {:>14.6e}  {:>14.6e}  {:>14.6e}  {:>14.6e}  {:>12.6}\n",
                log.label(),
                m.mean_observed,
                m.max_observed,
                m.mean_actual,
                m.max_actual,
                log.final_beta_hat().unwrap_or(f64::NAN)
            ));
        }
        text.push_str(&format!(
            "\nobservable equivalence (max |q~_a - q~_b| <= {EQUIVALENCE_TOLERANCE:e} rad)\n"
        ));
        for i in 0..logs.len() {
            for j in i + 1..logs.len() {
                let c = compare_runs(&logs[i], &logs[j]).map_err(|e| {
                    Failure::usage(format!("{} vs {}: {e}", logs[i].label(), logs[j].label()))
                })?;
                let verdict = if c.max_q_tilde() <= EQUIVALENCE_TOLERANCE { "yes" } else { "no" };
                text.push_str(&format!(
                    "{:<width$}  vs  {:<width$}  max = {:.6e}  {verdict}\n",
                    logs[i].label(),
                    logs[j].label(),
                    c.max_q_tilde()
                ));
            }
        }
        let _ = write!(out, "{text}");
        Ok(EXIT_OK)
    })();
    finish(result, err)
}

fn initial_posture(q0_deg: Option<&[f64]>, n: usize) -> Result<JointVector, Failure> {
    let q0 = match q0_deg {
        Some(v) => JointVector::from_degrees(v),
        None if n == 6 => default_initial_posture(),
        None => return Err(Failure::usage(format!("{n}-joint attack needs --q0"))),
    };
    if q0.len() != n {
        return Err(Failure::usage(format!("--q0 has {} entries, attack has {n}", q0.len())));
    }
    Ok(q0)
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

/// Evaluates the undetectability conditions for an attack-pair file.
pub fn cmd_check(
    attack_file: &Path,
    q0_deg: Option<&[f64]>,
    tol: Option<f64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let result = (|| {
        let src = read_input(attack_file)?;
        let pair = parse_attack_pair(&src, &attack_file.display().to_string()).map_err(Failure::from_core)?;
        let q0 = initial_posture(q0_deg, pair.dim())?;
        let report = check_conditions(&pair, &q0, tol.unwrap_or(DEFAULT_CONDITION_TOLERANCE))
            .map_err(Failure::from_core)?;
        let _ = writeln!(out, "attack       {}", pair.label);
        let _ = writeln!(out, "{report}");
        Ok(if report.is_undetectable() { EXIT_OK } else { EXIT_DETECTABLE })
    })();
    finish(result, err)
}

/// Builds the undetectable pair for the `S_x` in `sx_file` and writes it to
/// `dest`, or to `out` when no destination is given.
pub fn cmd_synthesize(
    sx_file: &Path,
    q0_deg: Option<&[f64]>,
    dest: Option<&Path>,
    unit: AngleUnit,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let result = (|| {
        let src = read_input(sx_file)?;
        let s_x = parse_matrix(&src, &sx_file.display().to_string()).map_err(Failure::from_core)?;
        let q0 = initial_posture(q0_deg, s_x.nrows())?;
        let mut pair = synthesize_undetectable(&s_x, &q0).map_err(Failure::from_core)?;
        if let Some(stem) = sx_file.file_stem() {
            pair.label = format!("synthesized from {}", stem.to_string_lossy());
        }
        let text = write_attack_pair(&pair, unit);
        match dest {
            Some(path) => {
                fs::write(path, &text).map_err(|e| Failure::write(path, e))?;
                let _ = writeln!(out, "wrote {}", path.display());
            }
            None => {
                let _ = write!(out, "{text}");
            }
        }
        Ok(EXIT_OK)
    })();
    finish(result, err)
}
